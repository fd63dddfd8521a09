//! Parameter sweeps: a grid file declares value lists per scenario key;
//! the cartesian product runs concurrently (worker count from
//! CENTFORCE_WORKERS) and failures are recorded per row without stopping
//! the sweep.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use centforce::scenario::parse_scenario;

use crate::run;

/// Grid file: non-comment lines of `key = v1, v2, v3`.
pub fn parse_grid(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut axes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, values)) = line.split_once('=') else {
            bail!("grid line {}: expected `key = v1, v2, ...`", idx + 1);
        };
        let values: Vec<String> =
            values.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            bail!("grid line {}: no values for `{}`", idx + 1, key.trim());
        }
        axes.push((key.trim().to_lowercase(), values));
    }
    if axes.is_empty() {
        bail!("grid file declares no axes");
    }
    Ok(axes)
}

fn cartesian(axes: &[(String, Vec<String>)]) -> Vec<Vec<(String, String)>> {
    let mut combos: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in axes {
        let mut next = Vec::with_capacity(combos.len() * values.len());
        for combo in &combos {
            for v in values {
                let mut c = combo.clone();
                c.push((key.clone(), v.clone()));
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

/// Base scenario text with the given keys replaced (or appended).
fn override_text(base: &str, overrides: &[(String, String)]) -> String {
    let mut out = String::new();
    'line: for raw in base.lines() {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if let Some((key, _)) = stripped.split_once('=') {
            let key = key.trim().to_lowercase();
            if overrides.iter().any(|(k, _)| *k == key) {
                continue 'line;
            }
            // p0 forms are mutually exclusive: an override of one drops
            // the other.
            if (key == "p0_multiple" || key == "p0_absolute")
                && overrides.iter().any(|(k, _)| k == "p0_multiple" || k == "p0_absolute")
            {
                continue 'line;
            }
        }
        out.push_str(raw);
        out.push('\n');
    }
    for (k, v) in overrides {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

fn combo_label(combo: &[(String, String)]) -> String {
    combo
        .iter()
        .map(|(k, v)| format!("{k}_{v}"))
        .collect::<Vec<_>>()
        .join("__")
}

struct RowResult {
    index: usize,
    label: String,
    status: String,
    final_e: Option<f64>,
    final_s: Option<f64>,
}

fn worker_count() -> usize {
    if let Ok(s) = std::env::var("CENTFORCE_WORKERS") {
        if let Ok(n) = s.parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Run the sweep; one subdirectory per grid point plus `aggregate.csv`.
pub fn execute(base_text: &str, grid_text: &str, out_dir: &Path) -> Result<()> {
    let axes = parse_grid(grid_text)?;
    let combos = cartesian(&axes);
    fs::create_dir_all(out_dir)?;

    let next = Mutex::new(0usize);
    let results: Mutex<Vec<RowResult>> = Mutex::new(Vec::with_capacity(combos.len()));
    let workers = worker_count().min(combos.len()).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = {
                    let mut guard = next.lock().unwrap();
                    let i = *guard;
                    if i >= combos.len() {
                        return;
                    }
                    *guard += 1;
                    i
                };
                let combo = &combos[index];
                let label = combo_label(combo);
                let text = override_text(base_text, combo);
                let row = match parse_scenario(&text)
                    .map_err(anyhow::Error::from)
                    .and_then(|scenario| {
                        let dir = out_dir.join(&label);
                        Ok(run::execute(&scenario, &dir, false)?.final_row)
                    }) {
                    Ok(Some(last)) => RowResult {
                        index,
                        label,
                        status: "ok".into(),
                        final_e: Some(last.log_negativity),
                        final_s: Some(last.entropy),
                    },
                    Ok(None) => RowResult {
                        index,
                        label,
                        status: "error: empty trace".into(),
                        final_e: None,
                        final_s: None,
                    },
                    Err(e) => RowResult {
                        index,
                        label,
                        status: format!("error: {e}").replace(',', ";").replace('\n', " "),
                        final_e: None,
                        final_s: None,
                    },
                };
                results.lock().unwrap().push(row);
            });
        }
    });

    let mut rows = results.into_inner().unwrap();
    rows.sort_by_key(|r| r.index);

    let mut f = fs::File::create(out_dir.join("aggregate.csv"))
        .context("creating aggregate.csv")?;
    write!(f, "index")?;
    for (key, _) in &axes {
        write!(f, ",{key}")?;
    }
    writeln!(f, ",run_dir,status,final_log_negativity,final_entropy")?;
    for row in &rows {
        write!(f, "{}", row.index)?;
        for (k, _) in &axes {
            let v = combos[row.index]
                .iter()
                .find(|(key, _)| key == k)
                .map(|(_, v)| v.as_str())
                .unwrap_or("");
            write!(f, ",{v}")?;
        }
        writeln!(
            f,
            ",{},{},{},{}",
            row.label,
            row.status,
            row.final_e.map(|v| format!("{v:.17e}")).unwrap_or_default(),
            row.final_s.map(|v| format!("{v:.17e}")).unwrap_or_default(),
        )?;
    }
    Ok(())
}
