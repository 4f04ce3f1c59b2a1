//! `h0` over a grid of divisors `a v1 + b v2` on the two-vertex graph, as CSV.

use num_traits::{Signed, Zero};
use wrr_core::oracle::{two_vertex_h0, two_vertex_nonempty};
use wrr_core::rational::{format_decimal, format_rational};
use wrr_core::{h0, linsys_nonempty, Divisor, Error, Rational, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub p: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
    pub verify: bool,
    pub decimal: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub a: Rational,
    pub b: Rational,
    pub h0: Rational,
    pub nonempty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutput {
    pub graph: WeightedGraph,
    pub rows: Vec<ScanRow>,
    /// Grid points where the pipeline disagreed with the closed form.
    pub mismatches: Vec<(Divisor, String)>,
}

/// `lo, lo + step, ...` up to and including `hi` when it lies on the grid.
pub fn grid(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    if !step.is_positive() {
        return out;
    }
    let mut x = lo.clone();
    while x <= *hi {
        out.push(x.clone());
        x += step;
    }
    out
}

pub fn scan2v(config: &ScanConfig) -> Result<ScanOutput, Error> {
    if !config.p.is_positive() {
        return Err(Error::NonpositiveWeight {
            i: 0,
            j: 1,
            weight: config.p.to_string(),
        });
    }
    let graph = WeightedGraph::new(2, &[(0, 1, config.p.clone())])?;
    let values = grid(&config.lo, &config.hi, &config.step);
    let mut rows = Vec::with_capacity(values.len() * values.len());
    let mut mismatches = Vec::new();
    for a in &values {
        for b in &values {
            let h = two_vertex_h0(a, b, &config.p)?;
            let nonempty = two_vertex_nonempty(a, b, &config.p)?;
            if config.verify {
                let d = Divisor::new(vec![a.clone(), b.clone()]);
                let engine = h0(&graph, &d)?;
                let engine_nonempty = linsys_nonempty(&graph, &d)?.is_some();
                if engine != h || engine_nonempty != nonempty {
                    mismatches.push((
                        d,
                        format!(
                            "closed form h0={h} nonempty={nonempty}, engine h0={engine} nonempty={engine_nonempty}"
                        ),
                    ));
                }
            }
            rows.push(ScanRow {
                a: a.clone(),
                b: b.clone(),
                h0: h,
                nonempty,
            });
        }
    }
    Ok(ScanOutput {
        graph,
        rows,
        mismatches,
    })
}

pub fn render_csv(rows: &[ScanRow], decimal: Option<usize>) -> String {
    let mut out = String::from("a,b,h0,nonempty");
    if decimal.is_some() {
        out.push_str(",h0_decimal");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}",
            format_rational(&r.a),
            format_rational(&r.b),
            format_rational(&r.h0),
            r.nonempty
        ));
        if let Some(digits) = decimal {
            out.push(',');
            out.push_str(&format_decimal(&r.h0, digits));
        }
        out.push('\n');
    }
    out
}

/// Number of grid points per axis.
pub fn axis_len(lo: &Rational, hi: &Rational, step: &Rational) -> usize {
    if hi < lo || step.is_zero() {
        return 0;
    }
    let span = (hi - lo) / step;
    span.floor().to_integer().try_into().map_or(0, |k: usize| k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wrr_core::rational::{frac, int};

    fn config(p: Rational, lo: i64, hi: i64, step: Rational) -> ScanConfig {
        ScanConfig {
            p,
            lo: int(lo),
            hi: int(hi),
            step,
            verify: true,
            decimal: None,
        }
    }

    #[test]
    fn known_rows() {
        let out = scan2v(&config(int(1), -1, 1, int(1))).unwrap();
        assert!(out.mismatches.is_empty());
        let csv = render_csv(&out.rows, None);
        assert!(csv.starts_with("a,b,h0,nonempty\n"));
        assert!(csv.contains("\n0,0,1,true\n"));

        let out = scan2v(&config(int(2), -1, 0, int(1))).unwrap();
        let csv = render_csv(&out.rows, Some(2));
        assert!(csv.contains("\n-1,-1,0,false,0.00\n"), "{csv}");
    }

    #[test]
    fn grid_size() {
        let step = frac(1, 2);
        let out = scan2v(&config(frac(3, 2), -1, 1, step.clone())).unwrap();
        assert_eq!(out.rows.len(), 25);
        assert_eq!(axis_len(&int(-1), &int(1), &step), 5);
        assert!(out.mismatches.is_empty());
        assert_eq!(grid(&int(0), &int(1), &frac(2, 3)).len(), 1 + 1);
    }
}
