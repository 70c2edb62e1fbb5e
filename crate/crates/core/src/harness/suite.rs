use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::ComplexExpr;
use super::report::{verdict_table, Verdict, VerdictRow};
use super::scenario::{run, Budget, Expectation, ExtraChecks, RunReport, Scenario};
use crate::complexes::{
    barycentric_subdivision, even_subcomplex, is_subdivided_simplex_boundary, join,
    link_split_check, odd_removal_chain, subdivided_boundary, sym_action_check, Complex, Tiebreak,
};
use crate::davis::BoundaryCondition;
use crate::error::{Error, Result};
use crate::spectral::EstimatorOptions;

/// Sizes and radii for [`verify_suite`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteBudget {
    pub name: String,
    /// Random complexes whose subdivisions are tested for flagness.
    pub random_complexes: usize,
    pub random_max_vertices: usize,
    /// Largest `n` for the even-part dimension formula.
    pub even_max_n: usize,
    /// Largest `n` for odd-removal chains.
    pub chain_max_n: usize,
    pub sym_max_k: usize,
    /// Largest `n` for the link-closure spot checks on `b∂Δ^n`.
    pub link_max_n: usize,
    pub b3_radius: usize,
    pub hexagon_small_q_radius: usize,
    pub hexagon_radius: usize,
    pub kunneth_radius: usize,
    pub local_radius: usize,
}

impl SuiteBudget {
    /// `smoke` (about a minute), `default` (a few minutes) or `full` (adds
    /// one radius to the b∂Δ³ sweep).
    pub fn named(name: &str) -> Result<Self> {
        let default = SuiteBudget {
            name: "default".into(),
            random_complexes: 25,
            random_max_vertices: 8,
            even_max_n: 6,
            chain_max_n: 5,
            sym_max_k: 2,
            link_max_n: 4,
            b3_radius: 3,
            hexagon_small_q_radius: 10,
            hexagon_radius: 8,
            kunneth_radius: 24,
            local_radius: 6,
        };
        match name {
            "default" => Ok(default),
            "smoke" => Ok(SuiteBudget {
                name: "smoke".into(),
                random_complexes: 8,
                even_max_n: 4,
                chain_max_n: 3,
                sym_max_k: 1,
                link_max_n: 3,
                hexagon_small_q_radius: 8,
                kunneth_radius: 10,
                local_radius: 4,
                ..default
            }),
            "full" => Ok(SuiteBudget {
                name: "full".into(),
                b3_radius: 4,
                ..default
            }),
            other => Err(Error::Config(format!(
                "unknown budget `{other}` (smoke, default, full)"
            ))),
        }
    }
}

/// Verdict table of the whole suite with the scenario runs behind it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub budget: SuiteBudget,
    pub combinatorial: Vec<VerdictRow>,
    pub numeric: Vec<VerdictRow>,
    pub invariants: Vec<VerdictRow>,
    pub runs: Vec<RunReport>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn rows(&self) -> impl Iterator<Item = &VerdictRow> {
        self.combinatorial
            .iter()
            .chain(&self.numeric)
            .chain(&self.invariants)
    }

    pub fn passed(&self) -> bool {
        self.rows().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("budget {}\n\ncombinatorial\n", self.budget.name);
        out.push_str(&verdict_table(&self.combinatorial));
        out.push_str("\nnumeric\n");
        out.push_str(&verdict_table(&self.numeric));
        out.push_str("\ninvariants\n");
        out.push_str(&verdict_table(&self.invariants));
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                out.push_str(&format!("note: {n}\n"));
            }
        }
        let count = |v: Verdict| self.rows().filter(|r| r.verdict == v).count();
        out.push_str(&format!(
            "\n{} pass, {} fail, {} inconclusive\n",
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Inconclusive)
        ));
        out
    }
}

/// Runs the combinatorial suite, the numeric sweeps and the invariant
/// checks attached to them. Items are isolated: an error becomes a failing
/// or inconclusive row.
pub fn verify_suite(budget: &SuiteBudget) -> Result<SuiteReport> {
    let combinatorial = vec![
        isolate("flagness of barycentric subdivisions", || {
            flagness_row(budget)
        }),
        isolate("f-vectors of b∂Δ² and b∂Δ³", f_vector_row),
        isolate("dimension of the even part of b∂Δ^n", || {
            even_dim_row(budget)
        }),
        isolate("odd-removal chains split links", || chain_row(budget)),
        isolate("symmetric group acts transitively on the even part", || {
            sym_row(budget)
        }),
        isolate(
            "links of b∂Δ^n are joins of subdivided boundaries",
            || link_closure_row(budget),
        ),
    ];

    let mut numeric = Vec::new();
    let mut invariants = Vec::new();
    let mut runs = Vec::new();
    let mut notes = vec![
        "numeric items are desk-scale truncations; full-strength q-grids and higher-dimensional instances are not reproduced"
            .to_string(),
    ];
    for s in numeric_scenarios(budget) {
        match run(&s, Path::new(".")) {
            Ok(r) => {
                for v in &r.verdicts {
                    let row = VerdictRow {
                        statement: format!("{}: {}", s.name, v.statement),
                        ..v.clone()
                    };
                    if s.expect.iter().any(|e| e.statement == v.statement) {
                        numeric.push(row);
                    } else {
                        invariants.push(row);
                    }
                }
                notes.extend(r.notes.iter().map(|n| format!("{}: {n}", s.name)));
                runs.push(r);
            }
            Err(e) => numeric.push(VerdictRow::new(
                &s.name,
                Verdict::Inconclusive,
                format!("did not run: {e}"),
                vec![],
            )),
        }
    }
    Ok(SuiteReport {
        budget: budget.clone(),
        combinatorial,
        numeric,
        invariants,
        runs,
        notes,
    })
}

fn isolate(statement: &str, f: impl FnOnce() -> Result<(bool, String)>) -> VerdictRow {
    match f() {
        Ok((ok, detail)) => VerdictRow::new(
            statement,
            if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
            vec![],
        ),
        Err(e) => VerdictRow::new(statement, Verdict::Fail, format!("error: {e}"), vec![]),
    }
}

/// Random complex on at most `max_vertices` vertices, from a fixed seed.
pub(crate) fn random_complex(rng: &mut ChaCha8Rng, max_vertices: usize) -> Result<Complex> {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let m = rng.gen_range(1..=n + 2);
    let mut facets: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for _ in 0..m {
        let size = rng.gen_range(2..=4.min(n));
        let mut f: BTreeSet<usize> = BTreeSet::new();
        while f.len() < size {
            f.insert(rng.gen_range(0..n));
        }
        facets.push(f.into_iter().collect());
    }
    Complex::new(names, facets, None)
}

fn flagness_row(b: &SuiteBudget) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut complexes = Vec::new();
    for _ in 0..b.random_complexes {
        complexes.push(random_complex(&mut rng, b.random_max_vertices)?);
    }
    let non_flag_inputs = complexes.iter().filter(|c| !c.is_flag()).count();
    for n in 2..=b.chain_max_n {
        complexes.push(crate::complexes::boundary_simplex(n)?);
    }
    let flag = complexes
        .iter()
        .filter(|c| barycentric_subdivision(c).is_flag())
        .count();
    Ok((
        flag == complexes.len(),
        format!(
            "{flag}/{} subdivisions flag ({non_flag_inputs} random inputs were not flag)",
            complexes.len()
        ),
    ))
}

fn f_vector_row() -> Result<(bool, String)> {
    let f2 = subdivided_boundary(2)?.f_vector();
    let f3 = subdivided_boundary(3)?.f_vector();
    Ok((
        f2 == [6, 6] && f3 == [14, 36, 24],
        format!("{f2:?}, {f3:?}"),
    ))
}

fn even_dim_row(b: &SuiteBudget) -> Result<(bool, String)> {
    let mut dims = Vec::new();
    let mut ok = true;
    for n in 2..=b.even_max_n {
        let d = even_subcomplex(&subdivided_boundary(n)?)?.dim();
        ok &= d == n.div_ceil(2) as isize - 1;
        dims.push(format!("n={n}: {d}"));
    }
    Ok((ok, format!("floor((n+1)/2) - 1; {}", dims.join(", "))))
}

fn chain_row(b: &SuiteBudget) -> Result<(bool, String)> {
    let mut ok = true;
    let mut steps = 0;
    for n in 2..=b.chain_max_n {
        let bc = subdivided_boundary(n)?;
        let chain = odd_removal_chain(&bc, Tiebreak::Lexicographic)?;
        let mut a = chain.start.clone();
        for step in &chain.steps {
            ok &= link_split_check(&a, &step.removed)?.verified;
            a = step.complex.clone();
            steps += 1;
        }
        ok &= chain.end.named_facets() == even_subcomplex(&bc)?.named_facets();
    }
    Ok((
        ok,
        format!("{steps} removal steps for n = 2..{}", b.chain_max_n),
    ))
}

fn sym_row(b: &SuiteBudget) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 1..=b.sym_max_k {
        let r = sym_action_check(k, b.sym_max_k)?;
        ok &= r.passed();
        parts.push(format!(
            "k={k}: {} top simplices, orbit {}",
            r.top_simplices, r.orbit_size
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// Link of a vertex of grading `g` in `b∂Δ^n` splits into `b∂Δ^g` below and
/// `b∂Δ^{n−g−1}` above; links in a join are joins with the other factor.
fn link_closure_row(b: &SuiteBudget) -> Result<(bool, String)> {
    let mut ok = true;
    let mut checked = 0;
    for n in 2..=b.link_max_n {
        let bc = subdivided_boundary(n)?;
        let g = bc.grading().ok_or(Error::MissingGrading)?.to_vec();
        for v in 0..bc.vertex_count() {
            ok &= link_is_join(&bc, v, g[v] as usize, n)?;
            checked += 1;
        }
    }
    let (a, c) = (subdivided_boundary(2)?, subdivided_boundary(3)?);
    let j = join(&a, &c);
    for name in a.names() {
        let lk = j
            .vertex_link(&format!("a.{name}"))
            .or_else(|_| j.vertex_link(name))?;
        let expected = join(&a.vertex_link(name)?, &c);
        ok &= lk.f_vector() == expected.f_vector();
        checked += 1;
    }
    Ok((ok, format!("{checked} vertex links")))
}

fn link_is_join(bc: &Complex, v: usize, gv: usize, n: usize) -> Result<bool> {
    let link = bc.link(&[v])?;
    let lg = link.grading().ok_or(Error::MissingGrading)?;
    let below: Vec<usize> = (0..link.vertex_count())
        .filter(|&u| (lg[u] as usize) < gv)
        .collect();
    let above: Vec<usize> = (0..link.vertex_count())
        .filter(|&u| (lg[u] as usize) > gv)
        .collect();
    let lower = link.full_subcomplex(&below);
    let upper = link.full_subcomplex(&above);
    let shifted = match upper.grading() {
        Some(ug) => upper.with_grading(Some(ug.iter().map(|x| x - (gv as u32 + 1)).collect()))?,
        None => upper.clone(),
    };
    let sphere = |c: &Complex, m: usize| {
        if m == 0 {
            c.is_empty()
        } else {
            is_subdivided_simplex_boundary(c, m)
        }
    };
    let product: BTreeSet<BTreeSet<String>> = lower
        .named_facets()
        .iter()
        .flat_map(|f| {
            upper
                .named_facets()
                .into_iter()
                .map(move |h| f.iter().cloned().chain(h).collect())
        })
        .collect();
    Ok(sphere(&lower, gv) && sphere(&shifted, n - gv - 1) && product == link.named_facets())
}

fn expect(
    statement: &str,
    q: &str,
    degree: usize,
    target: &str,
    tolerance: f64,
    at_most: bool,
) -> Expectation {
    Expectation {
        statement: statement.into(),
        q: q.into(),
        degree,
        radius: None,
        bc: BoundaryCondition::Neumann,
        target: target.into(),
        tolerance,
        at_most,
    }
}

fn scenario(
    name: &str,
    complex: &str,
    q: &[&str],
    radius: usize,
    expect: Vec<Expectation>,
) -> Scenario {
    Scenario {
        name: name.into(),
        complex: complex.parse().expect("suite expressions are valid"),
        q: q.iter().map(|s| s.to_string()).collect(),
        radii: vec![radius],
        bcs: vec![BoundaryCondition::Neumann, BoundaryCondition::Dirichlet],
        degrees: None,
        checks: ExtraChecks::default(),
        expect,
        budget: Budget::default(),
        options: EstimatorOptions::default(),
    }
}

/// The numeric sweeps of the suite, in order.
pub fn numeric_scenarios(b: &SuiteBudget) -> Vec<Scenario> {
    let b3 = "subdivide(boundary_simplex(3))";
    let hex = "subdivide(boundary_simplex(2))";
    let mut out = Vec::new();
    let mut vanish = Vec::new();
    for q in ["1/2", "1"] {
        for i in [2, 3] {
            vanish.push(expect(
                &format!("b∂Δ³ b^{i} = 0 at q = {q}"),
                q,
                i,
                "0",
                0.08,
                true,
            ));
        }
    }
    out.push(scenario(
        "b3-vanishing",
        b3,
        &["1/2", "1"],
        b.b3_radius,
        vanish,
    ));
    out.push(scenario(
        "hexagon-small-q",
        hex,
        &["1/5"],
        b.hexagon_small_q_radius,
        vec![
            expect("hexagon b^0 = 1/6 at q = 1/5", "1/5", 0, "1/6", 0.02, false),
            expect("hexagon b^1 = 0 at q = 1/5", "1/5", 1, "0", 0.03, true),
            expect("hexagon b^2 = 0 at q = 1/5", "1/5", 2, "0", 0.03, true),
        ],
    ));
    out.push(scenario(
        "hexagon-singer",
        hex,
        &["1/2", "1", "2"],
        b.hexagon_radius,
        vec![
            expect("hexagon b^1 = 1/2 at q = 1", "1", 1, "1/2", 0.05, false),
            expect("hexagon b^0 = 0 at q = 1", "1", 0, "0", 0.05, true),
            expect("hexagon b^2 = 0 at q = 1", "1", 2, "0", 0.05, true),
            expect("b(3-cycle) b^2 = 0 at q = 1/2", "1/2", 2, "0", 0.05, true),
        ],
    ));
    let mut k = scenario(
        "square-kunneth",
        "join(boundary_simplex(1), boundary_simplex(1))",
        &["1/5", "1"],
        b.kunneth_radius,
        vec![expect(
            "4-cycle b^0 = (2/3)^2 at q = 1/5",
            "1/5",
            0,
            "4/9",
            0.02,
            false,
        )],
    );
    k.checks.kunneth = Some((
        ComplexExpr::BoundarySimplex(1),
        ComplexExpr::BoundarySimplex(1),
    ));
    out.push(k);
    let mut local = scenario("hexagon-local", hex, &["1/5"], b.local_radius, vec![]);
    local.checks.cone = vec!["{0}".into()];
    local.checks.mayer_vietoris_steps = 3;
    out.push(local);
    out
}
