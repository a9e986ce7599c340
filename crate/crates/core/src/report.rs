//! Plain-text emitters for simulation and real-data results.
//!
//! Wide tables round to 4 decimals; the long format keeps full precision
//! (shortest round-trip representation) and is the source for plots.

use std::fmt::Write;

use crate::application::RealDataReport;
use crate::estimators::EstimatorId;
use crate::simulation::CellResult;

pub fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

/// AMSE for one (p, σ²) pair: estimators as rows, (ρ, n) pairs as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct WideTable {
    pub p: usize,
    pub sigma2: f64,
    pub columns: Vec<(f64, usize)>,
    pub rows: Vec<(EstimatorId, Vec<Option<f64>>)>,
}

impl WideTable {
    pub fn file_stem(&self) -> String {
        format!("table_p{}_sigma2_{}", self.p, self.sigma2)
    }

    fn column_label(&(rho, n): &(f64, usize)) -> String {
        format!("rho={rho:.2};n={n}")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("estimator");
        for c in &self.columns {
            write!(out, ",{}", Self::column_label(c)).unwrap();
        }
        out.push('\n');
        for (id, values) in &self.rows {
            out.push_str(id.name());
            for v in values {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&fmt4(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "Average MSE, p = {}, sigma^2 = {:.1}\n\n",
            self.p, self.sigma2
        );
        out.push_str("| estimator |");
        for (rho, n) in &self.columns {
            write!(out, " rho {rho:.2}, n {n} |").unwrap();
        }
        out.push_str("\n|---|");
        for _ in &self.columns {
            out.push_str("---:|");
        }
        out.push('\n');
        for (id, values) in &self.rows {
            write!(out, "| {id} |").unwrap();
            for v in values {
                match v {
                    Some(v) => write!(out, " {} |", fmt4(*v)).unwrap(),
                    None => out.push_str("  |"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn get(&self, id: EstimatorId, rho: f64, n: usize) -> Option<f64> {
        let col = self.columns.iter().position(|&(r, m)| r == rho && m == n)?;
        self.rows.iter().find(|(e, _)| *e == id)?.1[col]
    }
}

/// Groups cell results into one table per (p, σ²), sorted by p then σ².
pub fn wide_tables(results: &[CellResult]) -> Vec<WideTable> {
    let mut keys: Vec<(usize, f64)> = Vec::new();
    for r in results {
        let key = (r.cell.p, r.cell.sigma2);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    keys.into_iter()
        .map(|(p, sigma2)| {
            let members: Vec<&CellResult> = results
                .iter()
                .filter(|r| r.cell.p == p && r.cell.sigma2 == sigma2)
                .collect();
            let mut columns: Vec<(f64, usize)> = Vec::new();
            for r in &members {
                let c = (r.cell.rho, r.cell.n);
                if !columns.contains(&c) {
                    columns.push(c);
                }
            }
            columns.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let rows = EstimatorId::ALL
                .iter()
                .map(|&id| {
                    let values = columns
                        .iter()
                        .map(|&(rho, n)| {
                            members
                                .iter()
                                .find(|r| r.cell.rho == rho && r.cell.n == n)
                                .and_then(|r| r.amse.get(&id).copied())
                        })
                        .collect();
                    (id, values)
                })
                .collect();
            WideTable {
                p,
                sigma2,
                columns,
                rows,
            }
        })
        .collect()
}

pub const LONG_HEADER: &str =
    "rho,n,p,sigma2,replications,seed,estimator,amse,std_error,degenerate_count";

fn push_long_rows(out: &mut String, r: &CellResult) {
    let c = &r.cell;
    for id in EstimatorId::ALL {
        let amse = r.amse.get(&id).copied().unwrap_or(f64::NAN);
        let se = r.std_error.get(&id).copied().unwrap_or(f64::NAN);
        let deg = r.degenerate_count.get(&id).copied().unwrap_or(0);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.rho, c.n, c.p, c.sigma2, c.replications, c.seed, id, amse, se, deg
        )
        .unwrap();
    }
}

/// One row per (cell, estimator), full precision.
pub fn long_csv(results: &[CellResult]) -> String {
    let mut out = format!("{LONG_HEADER}\n");
    for r in results {
        push_long_rows(&mut out, r);
    }
    out
}

/// A named subset of the long table, one per figure of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSlice {
    pub name: &'static str,
    pub caption: &'static str,
    pub csv: String,
}

/// Long-format slices: AMSE against n (p = 4, σ² = 1), against σ²
/// (p = 8, ρ = 0.99, n = 100) and against ρ (p = 8, σ² = 5, n = 50).
/// Slices with no matching cells are omitted.
pub fn figure_slices(results: &[CellResult]) -> Vec<FigureSlice> {
    type Filter = fn(&CellResult) -> bool;
    let specs: [(&'static str, &'static str, Filter); 3] = [
        ("figure1", "AMSE against n for p = 4, sigma2 = 1.0", |r| {
            r.cell.p == 4 && r.cell.sigma2 == 1.0
        }),
        (
            "figure2",
            "AMSE against sigma2 for p = 8, rho = 0.99, n = 100",
            |r| r.cell.p == 8 && r.cell.rho == 0.99 && r.cell.n == 100,
        ),
        (
            "figure3",
            "AMSE against rho for p = 8, sigma2 = 5.0, n = 50",
            |r| r.cell.p == 8 && r.cell.sigma2 == 5.0 && r.cell.n == 50,
        ),
    ];
    specs
        .into_iter()
        .filter_map(|(name, caption, keep)| {
            let selected: Vec<&CellResult> = results.iter().filter(|r| keep(r)).collect();
            if selected.is_empty() {
                return None;
            }
            let mut csv = format!("{LONG_HEADER}\n");
            for r in selected {
                push_long_rows(&mut csv, r);
            }
            Some(FigureSlice { name, caption, csv })
        })
        .collect()
}

/// Y1..Y9 and OLS first, as in the published real-data tables, then the rest.
fn real_data_order() -> impl Iterator<Item = EstimatorId> {
    EstimatorId::Y_FAMILY
        .into_iter()
        .chain(std::iter::once(EstimatorId::OLS))
        .chain(
            EstimatorId::ALL
                .into_iter()
                .filter(|id| !id.is_y_family() && *id != EstimatorId::OLS),
        )
}

pub fn real_data_csv(r: &RealDataReport) -> String {
    let mut out = String::from("estimator,k,mse\n");
    for id in real_data_order() {
        writeln!(out, "{},{},{}", id, r.k[&id], r.mse[&id]).unwrap();
    }
    out
}

pub fn real_data_banner(r: &RealDataReport) -> String {
    let eig: Vec<String> = r.eigenvalues.iter().map(|v| fmt4(*v)).collect();
    format!(
        "dataset {} (n = {}, p = {})\neigenvalues of X'X: {}\ncondition number: {:.4}\nsigma2_hat: {:.6e}\n",
        r.id,
        r.n,
        r.p,
        eig.join(", "),
        r.condition_number,
        r.sigma2_hat
    )
}

pub fn real_data_markdown(r: &RealDataReport) -> String {
    let mut out = real_data_banner(r);
    out.push_str("\n| estimator | k | MSE |\n|---|---:|---:|\n");
    for id in real_data_order() {
        writeln!(
            out,
            "| {} | {} | {} |",
            id,
            fmt4(r.k[&id]),
            fmt4(r.mse[&id])
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::{run_grid, standard_grid, SimulationCell};

    fn small_results() -> Vec<CellResult> {
        let cells: Vec<SimulationCell> = standard_grid(5, 20)
            .into_iter()
            .filter(|c| c.n == 50 || c.n == 100)
            .collect();
        run_grid(&cells).unwrap()
    }

    #[test]
    fn wide_layout_and_consistency_with_long() {
        let results = small_results();
        let tables = wide_tables(&results);
        assert_eq!(tables.len(), 4);
        for t in &tables {
            assert_eq!(t.columns.len(), 6);
            assert_eq!(t.rows.len(), 16);
            let csv = t.to_csv();
            assert_eq!(csv.lines().count(), 17);
            assert!(csv.starts_with("estimator,rho=0.90;n=50,rho=0.90;n=100,rho=0.95;n=50"));
        }
        let long = long_csv(&results);
        assert_eq!(long.lines().count(), 1 + results.len() * 16);
        for line in long.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let (rho, n, p, sigma2): (f64, usize, usize, f64) = (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            );
            let id: EstimatorId = f[6].parse().unwrap();
            let amse: f64 = f[7].parse().unwrap();
            let t = tables
                .iter()
                .find(|t| t.p == p && t.sigma2 == sigma2)
                .unwrap();
            assert_eq!(fmt4(t.get(id, rho, n).unwrap()), fmt4(amse));
        }
    }

    #[test]
    fn long_values_round_trip_exactly() {
        let results = small_results();
        let long = long_csv(&results);
        let first = long.lines().nth(1).unwrap();
        let amse: f64 = first.split(',').nth(7).unwrap().parse().unwrap();
        assert_eq!(amse, results[0].amse[&EstimatorId::Y1]);
    }

    #[test]
    fn figure_slices_filter() {
        let results = small_results();
        let figs = figure_slices(&results);
        let names: Vec<&str> = figs.iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["figure1", "figure2", "figure3"]);
        // figure1: p = 4, sigma2 = 1 -> 3 rho x 2 n cells
        assert_eq!(figs[0].csv.lines().count(), 1 + 6 * 16);
        // figure2: two sigma2 values
        assert_eq!(figs[1].csv.lines().count(), 1 + 2 * 16);
        // figure3: three rho values
        assert_eq!(figs[2].csv.lines().count(), 1 + 3 * 16);
    }
}
