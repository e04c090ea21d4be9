//! Counting jets of projective space `P^(r-1)`, i.e. tuples of series with a
//! unit coordinate modulo scaling by units of `F_q[t]/(t^(N+1))`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::contact::{tally, ContactMode, ContactQuery, CountConfig, Tally};
use super::ideal::IdealGens;
use super::modq::Echelon;
use super::report::{consensus_in_dim, sampled_report, Codim, CountReport};
use crate::algebra::snf::SeriesMatrix;
use crate::algebra::{Field, SeriesOrder};
use crate::error::{Error, Result};

/// Counts on the projective side, together with the raw cone counts they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveReport {
    pub r: usize,
    pub level: u32,
    /// Quotient counts and their consensus codimension.
    pub report: CountReport,
    /// Codimension from the exact dimensions of the linear pieces, when the
    /// condition is linear (fixed base); `None` otherwise.
    pub exact_codim: Option<Codim>,
    /// Tuples with a unit coordinate, before dividing by `q^N (q-1)`.
    pub cone_counts: Vec<(u32, u128)>,
}

fn unit_group(q: u32, level: u32) -> u128 {
    u128::from(q).pow(level) * u128::from(q - 1)
}

/// Counts `[u] in P^(r-1)` at level `N` with `ord(B(t) u)` meeting the query,
/// for a fixed `s x r` series matrix `B`.
///
/// The conditions are linear in the coefficients of `u`. Each class has a
/// unique representative with `u_i = 1` for its first unit coordinate `i`, so
/// the quotient splits into affine pieces whose sizes are powers of `q`.
pub fn proj_count_fixed_base(
    base: &SeriesMatrix,
    query: &ContactQuery,
    primes: &[u32],
) -> Result<ProjectiveReport> {
    query.validate()?;
    if query.constraint.is_some() {
        return Err(Error::Precondition(
            "constraints are not supported with a fixed base".into(),
        ));
    }
    let level = query.level;
    if base.entries().iter().any(|e| e.level() != level) {
        return Err(Error::Dimension(format!(
            "base matrix is not at the query level {level}"
        )));
    }
    let (s, r) = (base.rows(), base.cols());
    let len = level as usize + 1;
    let unknowns = r * len;
    let proj_dim = ((r - 1) * len) as u32;

    let mut quotients = Vec::new();
    let mut cones = Vec::new();
    let mut best_dim: Option<usize> = None;
    for &q in primes {
        let field = Field::prime(u64::from(q))?;
        let b: Vec<Vec<u32>> = base
            .entries()
            .iter()
            .map(|e| {
                e.coeffs()
                    .iter()
                    .map(|c| Ok(field.convert(c)?.as_fp().map_or(0, |x| x.value())))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;
        // rows expressing [t^d] (B u)_i = 0
        let order_rows = |threshold: usize| -> Vec<Vec<u32>> {
            let mut rows = Vec::new();
            for i in 0..s {
                for d in 0..threshold.min(len) {
                    let mut row = vec![0u32; unknowns];
                    for j in 0..r {
                        for k in 0..=d {
                            row[j * len + k] = b[i * r + j][d - k];
                        }
                    }
                    rows.push(row);
                }
            }
            rows
        };
        let unit = |j: usize, k: usize| {
            let mut row = vec![0u32; unknowns];
            row[j * len + k] = 1;
            row
        };
        // free dimension of an affine system, None if empty
        let solve = |rows: &[Vec<u32>], affine: &[(Vec<u32>, u32)]| -> Option<usize> {
            let mut e = Echelon::new(q);
            for row in rows {
                e.insert(row.clone(), 0);
            }
            for (row, rhs) in affine {
                e.insert(row.clone(), *rhs);
            }
            e.consistent().then(|| unknowns - e.rank())
        };
        let size = |d: Option<usize>| d.map_or(0u128, |d| u128::from(q).pow(d as u32));

        let m = query.m as usize;
        let lo_rows = order_rows(m);
        let hi_rows = match query.mode {
            ContactMode::AtLeast => None,
            ContactMode::Exact => Some(order_rows(m + 1)),
        };
        let mut quotient = 0u128;
        let mut cone = 0u128;
        let mut top: Option<usize> = None;
        for i in 0..r {
            let mut lead: Vec<(Vec<u32>, u32)> = (0..i).map(|j| (unit(j, 0), 0)).collect();
            // cone piece: u_i(0) != 0, counted as all minus u_i(0) = 0
            let cone_with = |rows: &[Vec<u32>]| {
                let all = size(solve(rows, &lead));
                let mut zero = lead.clone();
                zero.push((unit(i, 0), 0));
                all - size(solve(rows, &zero))
            };
            let mut c = cone_with(&lo_rows);
            if let Some(h) = &hi_rows {
                c -= cone_with(h);
            }
            cone += c;
            // quotient piece: u_i = 1
            lead.push((unit(i, 0), 1));
            for k in 1..len {
                lead.push((unit(i, k), 0));
            }
            let d_lo = solve(&lo_rows, &lead);
            let mut piece = size(d_lo);
            if let Some(h) = &hi_rows {
                piece -= size(solve(h, &lead));
            }
            if piece > 0 {
                quotient += piece;
                top = top.max(d_lo);
            }
        }
        if cone != quotient * unit_group(q, level) {
            return Err(Error::InvariantViolation(format!(
                "cone count {cone} is not q^N(q-1) times the quotient count {quotient} at q = {q}"
            )));
        }
        if best_dim.is_some() && best_dim != top {
            return Err(Error::InvariantViolation(format!(
                "piece dimensions differ between primes: {best_dim:?} vs {top:?}"
            )));
        }
        best_dim = top;
        quotients.push((q, quotient));
        cones.push((q, cone));
    }
    let exact = match best_dim {
        None => Codim::Infinite,
        Some(d) => Codim::Exact(proj_dim - d as u32),
    };
    Ok(ProjectiveReport {
        r,
        level,
        report: consensus_in_dim(&quotients, proj_dim),
        exact_codim: Some(exact),
        cone_counts: cones,
    })
}

/// Counts jets of `A^(n-r) x P^(r-1)` meeting the query, where the last `r`
/// variables of `gens` are the homogeneous coordinates. The condition must be
/// invariant under scaling those coordinates by a unit.
pub fn proj_count_contact(
    gens: &IdealGens,
    r: usize,
    query: &ContactQuery,
    cfg: &CountConfig<'_>,
) -> Result<ProjectiveReport> {
    query.validate()?;
    let n = gens.nvars();
    if r == 0 || r > n {
        return Err(Error::OutOfRange {
            what: "projective coordinates",
            value: r,
            range: format!("1..={n}"),
        });
    }
    if query.constraint.is_some() {
        return Err(Error::Precondition(
            "constraints are not supported for projective counts".into(),
        ));
    }
    let level = query.level;
    let ideals = [
        gens.clone(),
        IdealGens::coordinates(gens.vars(), &(n - r..n).collect::<Vec<_>>()),
    ];
    let (mode, m) = (query.mode, query.m);
    let pred = move |o: &[SeriesOrder]| mode.accepts(o[0], m) && o[1] == SeriesOrder::Finite(0);
    let len = level as usize + 1;
    let dim = ((n - r) * len + (r - 1) * len) as u32;
    match tally(&ideals, level, cfg, &pred)? {
        Tally::Exact(cones) => {
            let mut quotients = Vec::new();
            for &(q, c) in &cones {
                let g = unit_group(q, level);
                if c % g != 0 {
                    return Err(Error::InvariantViolation(format!(
                        "cone count {c} at q = {q} is not divisible by q^N(q-1) = {g}; the condition is not scaling invariant"
                    )));
                }
                quotients.push((q, c / g));
            }
            Ok(ProjectiveReport {
                r,
                level,
                report: consensus_in_dim(&quotients, dim),
                exact_codim: None,
                cone_counts: cones,
            })
        }
        Tally::Sampled(s) => Ok(ProjectiveReport {
            r,
            level,
            report: sampled_report(&s, (n * len) as u32),
            exact_codim: None,
            cone_counts: Vec::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;
    use crate::algebra::{Matrix, TruncSeries};
    use crate::jets::report::CountStatus;

    fn diag(parts: &[u32], level: u32) -> SeriesMatrix {
        let f = Field::Rationals;
        let r = parts.len();
        Matrix::from_fn(r, r, |i, j| {
            if i == j {
                TruncSeries::monomial(f.one(), parts[i], level)
            } else {
                TruncSeries::zero(f, level)
            }
        })
    }

    /// Enumerates all tuples with a unit coordinate and tests the order directly.
    fn brute_cone(parts: &[u32], m: u32, level: u32, q: u32) -> u128 {
        let r = parts.len();
        let len = level as usize + 1;
        let total = (q as usize).pow((r * len) as u32);
        let mut count = 0;
        for idx in 0..total {
            let mut rest = idx;
            let mut coeffs = vec![0usize; r * len];
            for c in coeffs.iter_mut() {
                *c = rest % q as usize;
                rest /= q as usize;
            }
            if (0..r).all(|j| coeffs[j * len] == 0) {
                continue;
            }
            // ord(t^lambda_j u_j) = lambda_j + ord(u_j)
            let ok = (0..r).all(|j| {
                let ord = (0..len).find(|&k| coeffs[j * len + k] != 0);
                match ord {
                    Some(k) => parts[j] as usize + k >= m as usize,
                    None => true,
                }
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn fixed_base_examples() {
        let r = proj_count_fixed_base(&diag(&[0, 2], 2), &ContactQuery::at_least(1, 2), &[3]).unwrap();
        assert_eq!(r.exact_codim, Some(Codim::Exact(1)));
        assert_eq!(r.cone_counts[0].1, brute_cone(&[0, 2], 1, 2, 3));
        let r = proj_count_fixed_base(&diag(&[0, 2], 3), &ContactQuery::at_least(3, 3), &[2, 3]).unwrap();
        assert_eq!(r.exact_codim, Some(Codim::Infinite));
        assert_eq!(r.report.status, CountStatus::ExactEmpty);
        let r = proj_count_fixed_base(&diag(&[0, 0], 1), &ContactQuery::at_least(1, 1), &[2, 3]).unwrap();
        assert_eq!(r.exact_codim, Some(Codim::Infinite));
    }

    #[test]
    fn cone_counts_match_enumeration() {
        for parts in [[0u32, 1], [1, 1], [0, 3], [1, 2]] {
            for m in 0..=3 {
                let level = 3;
                let r = proj_count_fixed_base(&diag(&parts, level), &ContactQuery::at_least(m, level), &[2])
                    .unwrap();
                assert_eq!(r.cone_counts[0].1, brute_cone(&parts, m, level, 2), "{parts:?} {m}");
            }
        }
    }

    #[test]
    fn incidence_hypersurface() {
        let v = vars(&["x1", "x2", "y1", "y2"]);
        let w = IdealGens::parse(&v, &["x1*y1 + x2*y2"]).unwrap();
        let cfg = CountConfig::with_primes(&[3, 5]);
        let rep = proj_count_contact(&w, 2, &ContactQuery::at_least(1, 1), &cfg).unwrap();
        // a hyperplane in x over each point of P^1, then free degree-one coefficients
        for (i, q) in [3u128, 5].into_iter().enumerate() {
            assert_eq!(rep.report.per_prime[i].raw, q * (q + 1) * q.pow(3));
        }
        assert_eq!((rep.report.status, rep.report.codim), (CountStatus::Consensus, Codim::Exact(1)));
    }

    #[test]
    fn scaling_variance_is_detected() {
        let v = vars(&["x1", "y1", "y2"]);
        let w = IdealGens::parse(&v, &["y1 - 1"]).unwrap();
        let cfg = CountConfig::with_primes(&[3]);
        let err = proj_count_contact(&w, 2, &ContactQuery::at_least(1, 0), &cfg).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
    }
}
