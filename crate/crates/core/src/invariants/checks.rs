use std::fmt;

use serde::{Deserialize, Serialize};

use super::euler::{dual_euler, weighted_euler, weighted_euler_on};
use crate::complexes::{is_ghs, Complex};
use crate::davis::{exact_chamber_dimension, BoundaryCondition, Restriction};
use crate::error::{Error, Result};
use crate::racg::{growth_at, inverse_growth_at, CoxeterSystem, WeightAssignment};
use crate::rational::{to_f64, Q};
use crate::spectral::{vn_betti_estimate, BettiEstimate, EstimatorOptions, Truncation};

/// Floor of the numeric tolerance.
pub const BASE_TOLERANCE: f64 = 0.02;

/// One side of an identity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Side {
    Exact { value: String },
    Estimate { value: f64 },
}

impl Side {
    pub fn exact(q: &Q) -> Self {
        Side::Exact {
            value: q.to_string(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Side::Exact { value } => crate::rational::parse_q(value)
                .map(|q| to_f64(&q))
                .unwrap_or(f64::NAN),
            Side::Estimate { value } => *value,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    ExactPass,
    NumericPass,
    Fail,
}

impl CheckStatus {
    pub fn passed(self) -> bool {
        !matches!(self, CheckStatus::Fail)
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::ExactPass => "exact-pass",
            CheckStatus::NumericPass => "numeric-pass",
            CheckStatus::Fail => "fail",
        })
    }
}

/// Where a check was evaluated.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct CheckContext {
    pub complex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcomplex: Option<String>,
    pub q: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bc: Option<BoundaryCondition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

/// An identity between two quantities with its verdict.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Side,
    pub rhs: Side,
    /// Tolerance of a numeric comparison; absent for exact ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub status: CheckStatus,
    pub context: CheckContext,
}

impl IdentityCheck {
    pub fn exact(name: &str, lhs: &Q, rhs: &Q, context: CheckContext) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs: Side::exact(lhs),
            rhs: Side::exact(rhs),
            tolerance: None,
            status: if lhs == rhs {
                CheckStatus::ExactPass
            } else {
                CheckStatus::Fail
            },
            context,
        }
    }

    /// `|lhs − rhs| ≤ tol`.
    pub fn numeric(name: &str, lhs: Side, rhs: Side, tol: f64, context: CheckContext) -> Self {
        let ok = (lhs.as_f64() - rhs.as_f64()).abs() <= tol;
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            tolerance: Some(tol),
            status: if ok {
                CheckStatus::NumericPass
            } else {
                CheckStatus::Fail
            },
            context,
        }
    }

    /// `lhs ≤ rhs + tol`.
    pub fn at_most(name: &str, lhs: f64, rhs: f64, tol: f64, context: CheckContext) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs: Side::Estimate { value: lhs },
            rhs: Side::Estimate { value: rhs },
            tolerance: Some(tol),
            status: if lhs <= rhs + tol {
                CheckStatus::NumericPass
            } else {
                CheckStatus::Fail
            },
            context,
        }
    }
}

/// `max(0.02, 2 × |neumann − dirichlet|)`.
pub fn cell_tolerance(neumann: f64, dirichlet: Option<f64>) -> f64 {
    match dirichlet {
        Some(d) => BASE_TOLERANCE.max(2.0 * (neumann - d).abs()),
        None => BASE_TOLERANCE,
    }
}

/// Pairs checks that differ only in boundary condition and widens each
/// pair's tolerance to `2 × max(|Δlhs|, |Δrhs|)`, then re-evaluates them.
/// Checks without a partner are left alone. `at_most` selects the
/// inequality `lhs ≤ rhs + tol` instead of `|lhs − rhs| ≤ tol`.
pub fn widen_by_disagreement(checks: &mut [IdentityCheck], at_most: bool) {
    let key = |c: &IdentityCheck| {
        (
            c.name.clone(),
            c.context.complex.clone(),
            c.context.subcomplex.clone(),
            c.context.q.clone(),
            c.context.radius,
            c.context.degree,
        )
    };
    let mut widened = vec![None; checks.len()];
    for i in 0..checks.len() {
        for j in i + 1..checks.len() {
            if checks[i].context.bc == checks[j].context.bc || key(&checks[i]) != key(&checks[j]) {
                continue;
            }
            let gap = (checks[i].lhs.as_f64() - checks[j].lhs.as_f64())
                .abs()
                .max((checks[i].rhs.as_f64() - checks[j].rhs.as_f64()).abs());
            for k in [i, j] {
                let w: f64 = widened[k].unwrap_or(0.0);
                widened[k] = Some(w.max(2.0 * gap));
            }
        }
    }
    for (c, w) in checks.iter_mut().zip(widened) {
        let (Some(w), Some(tol)) = (w, c.tolerance) else {
            continue;
        };
        if c.status == CheckStatus::ExactPass {
            continue;
        }
        let tol = tol.max(w);
        let (l, r) = (c.lhs.as_f64(), c.rhs.as_f64());
        let ok = if at_most {
            l <= r + tol
        } else {
            (l - r).abs() <= tol
        };
        c.tolerance = Some(tol);
        c.status = if ok {
            CheckStatus::NumericPass
        } else {
            CheckStatus::Fail
        };
    }
}

fn context_for(name: &str, q: &WeightAssignment, sys: &CoxeterSystem) -> CheckContext {
    CheckContext {
        complex: name.into(),
        q: q.describe(sys),
        ..Default::default()
    }
}

/// `χ_q(L) · W(q) = 1` at a point, with `χ_q` from the faces of `L` and
/// `W` from the spherical subsets of the Coxeter system.
pub fn euler_growth_identity(
    name: &str,
    l: &Complex,
    q: &WeightAssignment,
) -> Result<IdentityCheck> {
    let sys = CoxeterSystem::from_complex(l)?;
    let chi = weighted_euler(l, q)?;
    let ctx = context_for(name, q, &sys);
    let lhs = match growth_at(&sys, q) {
        Ok(w) => chi * w,
        // at a pole both sides vanish: compare χ_q with 1/W instead
        Err(Error::Pole) => {
            return Ok(IdentityCheck::exact(
                "euler-equals-inverse-growth",
                &chi,
                &inverse_growth_at(&sys, q),
                ctx,
            ))
        }
        Err(e) => return Err(e),
    };
    Ok(IdentityCheck::exact(
        "euler-times-growth",
        &lhs,
        &Q::from_integer(1.into()),
        ctx,
    ))
}

/// Alternating sum of the estimator at a threshold above the spectrum,
/// `Σ_i (−1)^i Σ_{|T|=i} Π q_v/(1+q_v)`, equals `χ_q(L)`.
pub fn trace_euler_identity(
    name: &str,
    l: &Complex,
    q: &WeightAssignment,
) -> Result<IdentityCheck> {
    let sys = CoxeterSystem::from_complex(l)?;
    let mut sum = Q::from_integer(0.into());
    for i in 0..=sys.max_spherical() {
        let c = exact_chamber_dimension(&sys, q, i, Restriction::Full);
        if i % 2 == 0 {
            sum += c;
        } else {
            sum -= c;
        }
    }
    Ok(IdentityCheck::exact(
        "trace-alternating-sum",
        &sum,
        &weighted_euler(l, q)?,
        context_for(name, q, &sys),
    ))
}

/// `Σ_i (−1)^i b̂^i ≈ χ_q(L)` for estimates covering every degree.
pub fn euler_consistency(
    name: &str,
    l: &Complex,
    q: &WeightAssignment,
    estimates: &[BettiEstimate],
    tol: f64,
) -> Result<IdentityCheck> {
    let top = (l.dim() + 1).max(0) as usize;
    let mut sum = 0.0;
    for i in 0..=top {
        let e = estimates
            .iter()
            .find(|e| e.degree == i)
            .ok_or_else(|| Error::Precondition(format!("no estimate in degree {i}")))?;
        sum += if i % 2 == 0 { e.value() } else { -e.value() };
    }
    let sys = CoxeterSystem::from_complex(l)?;
    let mut ctx = context_for(name, q, &sys);
    if let Some(e) = estimates.first() {
        ctx.radius = Some(e.radius);
        ctx.bc = Some(e.bc);
    }
    Ok(IdentityCheck::numeric(
        "euler-consistency",
        Side::Estimate { value: sum },
        Side::exact(&weighted_euler(l, q)?),
        tol,
        ctx,
    ))
}

/// Poincaré duality for a flag generalized homology sphere of dimension
/// `n − 1`: the exact comparison `χ_q = (−1)^n χ_{1/q}` followed by
/// `b̂_q^i ≈ b̂_{1/q}^{n−i}` for every degree estimated on both sides.
pub fn duality_check(
    name: &str,
    l: &Complex,
    q: &WeightAssignment,
    at_q: &[BettiEstimate],
    at_inverse: &[BettiEstimate],
    tol: f64,
) -> Result<Vec<IdentityCheck>> {
    if !l.is_flag() || !is_ghs(l).verdict {
        return Err(Error::Precondition(
            "duality needs a flag generalized homology sphere".into(),
        ));
    }
    let sys = CoxeterSystem::from_complex(l)?;
    let n = (l.dim() + 1) as usize;
    let ctx = context_for(name, q, &sys);
    let mut out = vec![IdentityCheck::exact(
        "duality-euler",
        &weighted_euler(l, q)?,
        &dual_euler(l, q)?,
        ctx.clone(),
    )];
    for e in at_q {
        if e.degree > n {
            continue;
        }
        if let Some(f) = at_inverse.iter().find(|f| f.degree == n - e.degree) {
            let c = CheckContext {
                degree: Some(e.degree),
                radius: Some(e.radius),
                bc: Some(e.bc),
                ..ctx.clone()
            };
            out.push(IdentityCheck::numeric(
                "duality-betti",
                Side::Estimate { value: e.value() },
                Side::Estimate { value: f.value() },
                tol,
                c,
            ));
        }
    }
    Ok(out)
}

/// Künneth for joins: `b̂^k(L1 ∗ L2) ≈ Σ_{i+j=k} b̂^i(L1) b̂^j(L2)`.
pub fn kunneth_check(
    name: &str,
    first: &[BettiEstimate],
    second: &[BettiEstimate],
    joined: &[BettiEstimate],
    tol: f64,
) -> Result<Vec<IdentityCheck>> {
    let value = |es: &[BettiEstimate], i: usize| -> Result<f64> {
        es.iter()
            .find(|e| e.degree == i)
            .map(BettiEstimate::value)
            .ok_or_else(|| Error::Precondition(format!("missing estimate in degree {i}")))
    };
    let top1 = first.iter().map(|e| e.degree).max().unwrap_or(0);
    let top2 = second.iter().map(|e| e.degree).max().unwrap_or(0);
    let mut out = Vec::new();
    for e in joined {
        let k = e.degree;
        let mut conv = 0.0;
        for i in 0..=k.min(top1) {
            if k - i <= top2 {
                conv += value(first, i)? * value(second, k - i)?;
            }
        }
        let ctx = CheckContext {
            complex: name.into(),
            degree: Some(k),
            radius: Some(e.radius),
            bc: Some(e.bc),
            q: format!("{:?}", e.q),
            ..Default::default()
        };
        out.push(IdentityCheck::numeric(
            "kunneth",
            Side::Estimate { value: e.value() },
            Side::Estimate { value: conv },
            tol,
            ctx,
        ));
    }
    Ok(out)
}

/// Plateau values `b̂^i` on `W_L Σ_A` for each degree, from one assembly.
fn restricted_values(
    t: &Truncation,
    l: &Complex,
    a: &Complex,
    q: &WeightAssignment,
    degrees: &[usize],
    bc: BoundaryCondition,
    opts: &EstimatorOptions,
) -> Result<Vec<f64>> {
    let wc = t.assemble(q, bc, Restriction::subcomplex(l, a)?)?;
    degrees
        .iter()
        .map(|&i| Ok(vn_betti_estimate(&wc, i, opts)?.value()))
        .collect()
}

/// Cone formula `b̂^i(C A_v) ≈ b̂^i(A_v)/(1+q_v)`, with `A_v` the link and
/// `C A_v` the closed star of `v` in `l`, both estimated on `W_L Σ_A`.
#[allow(clippy::too_many_arguments)]
pub fn cone_check(
    name: &str,
    t: &Truncation,
    l: &Complex,
    v: &str,
    q: &WeightAssignment,
    degrees: &[usize],
    bc: BoundaryCondition,
    opts: &EstimatorOptions,
    tol: f64,
) -> Result<Vec<IdentityCheck>> {
    let vi = l.vertex(v)?;
    let qv = to_f64(q.get(vi as u8));
    let star = restricted_values(t, l, &l.closed_star(vi), q, degrees, bc, opts)?;
    let link = restricted_values(t, l, &l.vertex_link(v)?, q, degrees, bc, opts)?;
    let sys = t.system();
    let mut out = Vec::new();
    for (k, &i) in degrees.iter().enumerate() {
        let ctx = CheckContext {
            subcomplex: Some(format!("star({v})")),
            degree: Some(i),
            radius: Some(t.catalog.radius()),
            bc: Some(bc),
            ..context_for(name, q, sys)
        };
        out.push(IdentityCheck::numeric(
            "cone",
            Side::Estimate { value: star[k] },
            Side::Estimate {
                value: link[k] / (1.0 + qv),
            },
            tol,
            ctx,
        ));
    }
    Ok(out)
}

/// Rank inequality from the weakly exact Mayer–Vietoris sequence of
/// `A = B ∪ C A_v` with `B = A − v`:
/// `b̂^i(A) ≤ b̂^i(B) + b̂^i(C A_v) + b̂^{i−1}(A_v) + tol`.
#[allow(clippy::too_many_arguments)]
pub fn mayer_vietoris_check(
    name: &str,
    t: &Truncation,
    l: &Complex,
    a: &Complex,
    v: &str,
    q: &WeightAssignment,
    degrees: &[usize],
    bc: BoundaryCondition,
    opts: &EstimatorOptions,
    tol: f64,
) -> Result<Vec<IdentityCheck>> {
    let vi = a.vertex(v)?;
    let all: Vec<usize> = (0..=t.catalog.top_dim()).collect();
    let whole = restricted_values(t, l, a, q, &all, bc, opts)?;
    let rest = restricted_values(t, l, &a.remove_vertices(&[vi]), q, &all, bc, opts)?;
    let star = restricted_values(t, l, &a.closed_star(vi), q, &all, bc, opts)?;
    let link = restricted_values(t, l, &a.vertex_link(v)?, q, &all, bc, opts)?;
    let sys = t.system();
    let mut out = Vec::new();
    for &i in degrees {
        if i >= all.len() {
            return Err(Error::DegreeOutOfRange(i));
        }
        let link_term = if i == 0 { 0.0 } else { link[i - 1] };
        let ctx = CheckContext {
            subcomplex: Some(format!("remove {v}")),
            degree: Some(i),
            radius: Some(t.catalog.radius()),
            bc: Some(bc),
            ..context_for(name, q, sys)
        };
        out.push(IdentityCheck::at_most(
            "mayer-vietoris",
            whole[i],
            rest[i] + star[i] + link_term,
            tol,
            ctx,
        ));
    }
    Ok(out)
}

/// `χ_q(L) = χ_q(L1) + χ_q(L2) − χ_q(L1 ∩ L2)` for full subcomplexes
/// (given by vertex sets) covering `L`.
pub fn euler_additivity(
    name: &str,
    l: &Complex,
    first: &[usize],
    second: &[usize],
    q: &WeightAssignment,
) -> Result<IdentityCheck> {
    let inter: Vec<usize> = first
        .iter()
        .copied()
        .filter(|v| second.contains(v))
        .collect();
    let rhs = weighted_euler_on(l, first, q)? + weighted_euler_on(l, second, q)?
        - weighted_euler_on(l, &inter, q)?;
    let sys = CoxeterSystem::from_complex(l)?;
    Ok(IdentityCheck::exact(
        "euler-additivity",
        &weighted_euler(l, q)?,
        &rhs,
        context_for(name, q, &sys),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cycle, subdivided_boundary};
    use crate::rational::{q_frac, q_int};

    #[test]
    fn exact_identities() {
        for (l, q) in [
            (cycle(6).unwrap(), q_frac(1, 5)),
            (subdivided_boundary(3).unwrap(), q_frac(1, 2)),
        ] {
            let w = WeightAssignment::uniform(l.vertex_count(), q).unwrap();
            assert_eq!(
                euler_growth_identity("l", &l, &w).unwrap().status,
                CheckStatus::ExactPass
            );
            assert_eq!(
                trace_euler_identity("l", &l, &w).unwrap().status,
                CheckStatus::ExactPass
            );
        }
        let hex = cycle(6).unwrap();
        let one = WeightAssignment::uniform(6, q_int(1)).unwrap();
        assert_eq!(
            euler_growth_identity("hex", &hex, &one).unwrap().status,
            CheckStatus::ExactPass
        );
    }

    #[test]
    fn additivity_on_a_cycle() {
        let hex = cycle(6).unwrap();
        let q = WeightAssignment::new((1..=6).map(|i| q_frac(i, 5)).collect()).unwrap();
        let c = euler_additivity("hex", &hex, &[0, 1, 2, 3], &[3, 4, 5, 0], &q).unwrap();
        assert_eq!(c.status, CheckStatus::ExactPass);
    }

    #[test]
    fn duality_requires_a_flag_sphere() {
        let not_flag = crate::complexes::boundary_simplex(2).unwrap();
        let q = WeightAssignment::uniform(3, q_int(1)).unwrap();
        assert!(duality_check("t", &not_flag, &q, &[], &[], 0.02).is_err());
        let hex = cycle(6).unwrap();
        let q = WeightAssignment::uniform(6, q_frac(1, 3)).unwrap();
        let checks = duality_check("hex", &hex, &q, &[], &[], 0.02).unwrap();
        assert_eq!(checks[0].status, CheckStatus::ExactPass);
    }

    #[test]
    fn tolerance_scales_with_disagreement() {
        assert!((cell_tolerance(0.5, Some(0.495)) - 0.02).abs() < 1e-15);
        assert!((cell_tolerance(0.5, Some(0.4)) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn paired_checks_widen() {
        let ctx = |bc| CheckContext {
            complex: "x".into(),
            q: "1".into(),
            degree: Some(1),
            bc: Some(bc),
            ..Default::default()
        };
        let mut v = vec![
            IdentityCheck::at_most("mv", 0.3, 0.1, 0.02, ctx(BoundaryCondition::Neumann)),
            IdentityCheck::at_most("mv", 0.05, 0.1, 0.02, ctx(BoundaryCondition::Dirichlet)),
            IdentityCheck::at_most(
                "mv",
                0.3,
                0.1,
                0.02,
                CheckContext {
                    degree: Some(2),
                    ..ctx(BoundaryCondition::Neumann)
                },
            ),
        ];
        widen_by_disagreement(&mut v, true);
        assert!((v[0].tolerance.unwrap() - 0.5).abs() < 1e-12);
        assert!(v[0].status.passed() && v[1].status.passed());
        assert_eq!(v[2].status, CheckStatus::Fail);
    }
}
