//! Shared fixtures, generators and independent dense oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pathweave::expr::{PathExpr, Pattern, Scalar, Term};
use pathweave::rewrite::Bindings;
use pathweave::store::{parse_signatures, MultiRelTensor};
use pathweave::FilterSpec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const FIXTURE1: &str = "\
h1\tauthored\ta1
h1\tauthored\ta2
h2\tauthored\ta2
h2\tauthored\ta3
a1\tcites\ta3
j1\tcontains\ta1
j1\tcontains\ta3
j1\tcategory\ts1
";

pub const SIGNATURES: &str = "\
authored\tH\tA
cites\tA\tA
contains\tJ\tA
category\tJ\tS
developed\tH\tP
";

pub fn fixture1() -> MultiRelTensor {
    pathweave::parse_triples(FIXTURE1)
        .unwrap()
        .with_signatures(parse_signatures(SIGNATURES).unwrap())
}

// ---------------------------------------------------------------- tensors

/// Vertices `v0..v{n-1}` plus `extra`, each label an independent random
/// relation of the given density.
pub fn random_tensor_named(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra: &[&str],
    labels: &[&str],
    density: f64,
) -> MultiRelTensor {
    let mut b = MultiRelTensor::builder();
    let mut names: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    names.extend(extra.iter().map(|s| s.to_string()));
    for v in &names {
        b.vertex(v);
    }
    let total = names.len();
    for l in labels {
        b.label(l);
        for i in 0..total {
            for j in 0..total {
                if rng.gen_bool(density) {
                    b.edge_ids(i, l, j);
                }
            }
        }
    }
    b.build().unwrap()
}

pub fn random_tensor(rng: &mut ChaCha8Rng, n: usize, labels: &[&str]) -> MultiRelTensor {
    let density = rng.gen_range(0.05..0.5);
    random_tensor_named(rng, n, &[], labels, density)
}

pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                out.push((i, j));
            }
        }
    }
    out
}

// ------------------------------------------------------------ dense oracle

pub fn dense_zero(n: usize) -> Dense {
    vec![vec![0.0; n]; n]
}

pub fn dense_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Dense {
    let mut d = dense_zero(n);
    for &(i, j) in pairs {
        d[i][j] = 1.0;
    }
    d
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = dense_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

pub fn dense_t(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn zip(a: &Dense, b: &Dense, f: impl Fn(f64, f64) -> f64) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| f(x, y)).collect())
        .collect()
}

fn map(a: &Dense, f: impl Fn(f64) -> f64) -> Dense {
    a.iter().map(|r| r.iter().map(|&x| f(x)).collect()).collect()
}

/// Direct dense evaluation, written independently of the library kernels.
/// `None` where the library reports an error (negation of a non-{0,1}
/// matrix, unknown label or vertex).
pub fn dense_eval(e: &PathExpr, t: &MultiRelTensor) -> Option<Dense> {
    let n = t.n();
    let id = |v: &String| t.vertices().id(v);
    Some(match e {
        PathExpr::Slice(l) => {
            let pairs: Vec<_> = t.slice(l).ok()?.pairs().iter().copied().collect();
            dense_from_pairs(n, &pairs)
        }
        PathExpr::Filter(f) => {
            let mut d = dense_zero(n);
            for i in 0..n {
                for j in 0..n {
                    let on = match f {
                        FilterSpec::Row(v) => i == id(v)?,
                        FilterSpec::Col(v) => j == id(v)?,
                        FilterSpec::Entry(v, w) => i == id(v)? && j == id(w)?,
                        FilterSpec::Identity => i == j,
                        FilterSpec::Ones => true,
                        FilterSpec::Zeros => false,
                    };
                    d[i][j] = if on { 1.0 } else { 0.0 };
                }
            }
            d
        }
        PathExpr::MatMul(a, b) => dense_mul(&dense_eval(a, t)?, &dense_eval(b, t)?),
        PathExpr::Transpose(a) => dense_t(&dense_eval(a, t)?),
        PathExpr::Hadamard(a, b) => zip(&dense_eval(a, t)?, &dense_eval(b, t)?, |x, y| x * y),
        PathExpr::Add(a, b) => zip(&dense_eval(a, t)?, &dense_eval(b, t)?, |x, y| x + y),
        PathExpr::Not(a) => {
            let d = dense_eval(a, t)?;
            if d.iter().flatten().any(|&x| x != 0.0 && x != 1.0) {
                return None;
            }
            map(&d, |x| 1.0 - x)
        }
        PathExpr::Clip(a) => map(&dense_eval(a, t)?, |x| if x > 0.0 { 1.0 } else { 0.0 }),
        PathExpr::VOut(a, p) => {
            let d = dense_eval(a, t)?;
            d.iter()
                .map(|r| {
                    let keep = r.iter().sum::<f64>() > *p as f64;
                    vec![if keep { 1.0 } else { 0.0 }; n]
                })
                .collect()
        }
        PathExpr::VIn(a, p) => {
            let d = dense_t(&dense_eval(a, t)?);
            let rows: Dense = d
                .iter()
                .map(|r| {
                    let keep = r.iter().sum::<f64>() > *p as f64;
                    vec![if keep { 1.0 } else { 0.0 }; n]
                })
                .collect();
            dense_t(&rows)
        }
        PathExpr::Scale(s, a) => {
            let l = s.get();
            map(&dense_eval(a, t)?, |x| l * x)
        }
    })
}

pub fn dense_close(a: &Dense, b: &Dense, tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| {
            (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
        })
}

// -------------------------------------------------------------- expressions

fn leaf(rng: &mut ChaCha8Rng, labels: &[&str], n: usize) -> PathExpr {
    let v = |rng: &mut ChaCha8Rng| format!("v{}", rng.gen_range(0..n));
    match rng.gen_range(0..16) {
        0 => PathExpr::Filter(FilterSpec::Row(v(rng))),
        1 => PathExpr::Filter(FilterSpec::Col(v(rng))),
        2 => PathExpr::Filter(FilterSpec::Entry(v(rng), v(rng))),
        3 => PathExpr::identity(),
        4 => PathExpr::Filter(FilterSpec::Ones),
        5 => PathExpr::Filter(FilterSpec::Zeros),
        _ => PathExpr::slice(*labels.choose(rng).unwrap()),
    }
}

const FACTORS: [f64; 8] = [0.0, 1.0, 2.0, 3.0, 0.5, 0.4, 0.6, 1.5];

/// A random expression of depth at most `depth` whose evaluation cannot
/// fail on negation: `not` is only applied to syntactically {0,1}
/// operands. With `boolean` set the result itself is {0,1}-valued. Small
/// redundant shapes (double negation, self-Hadamard, units) are mixed in so
/// the simplifier has work to do.
pub fn random_expr(rng: &mut ChaCha8Rng, labels: &[&str], n: usize, depth: usize, boolean: bool) -> PathExpr {
    if depth <= 1 || rng.gen_bool(0.15) {
        return leaf(rng, labels, n);
    }
    let d = depth - 1;
    let b = |rng: &mut ChaCha8Rng| random_expr(rng, labels, n, d, true);
    let any = |rng: &mut ChaCha8Rng| random_expr(rng, labels, n, d, false);
    let pick = if boolean { rng.gen_range(0..13) } else { rng.gen_range(0..20) };
    match pick {
        0 => b(rng).not(),
        1 => any(rng).clip(),
        2 => any(rng).vout(rng.gen_range(0..3)),
        3 => any(rng).vin(rng.gen_range(0..3)),
        4 => b(rng).t(),
        5 => b(rng).hadamard(b(rng)),
        6 => {
            let x = b(rng);
            x.clone().hadamard(x)
        }
        7 => {
            let x = b(rng);
            x.clone().hadamard(x.not())
        }
        8 => b(rng).not().not(),
        9 => b(rng).hadamard(PathExpr::Filter(FilterSpec::Ones)),
        10 => b(rng).not().hadamard(b(rng).not()),
        11 => b(rng).clip().hadamard(b(rng).clip()),
        12 => b(rng).t().hadamard(b(rng).t()),
        13 => any(rng).matmul(any(rng)),
        14 => any(rng).add(any(rng)),
        15 => any(rng).scale(*FACTORS.choose(rng).unwrap()),
        16 => any(rng).t(),
        17 => any(rng).hadamard(any(rng)),
        18 => {
            let c = b(rng);
            let l = *FACTORS.choose(rng).unwrap();
            any(rng).hadamard(c.clone()).scale(l).add(any(rng).hadamard(c).scale(l))
        }
        _ => any(rng).matmul(PathExpr::identity()).add(PathExpr::Filter(FilterSpec::Zeros)),
    }
}

// ---------------------------------------------------------- rule bindings

#[derive(Default, Debug)]
pub struct MetaKinds {
    pub exprs: Vec<String>,
    pub vertices: Vec<String>,
    pub scalars: Vec<String>,
    pub ints: Vec<String>,
}

fn add(v: &mut Vec<String>, m: &str) {
    if !v.iter().any(|x| x == m) {
        v.push(m.to_string());
    }
}

pub fn meta_kinds(p: &Pattern) -> MetaKinds {
    fn go(p: &Pattern, out: &mut MetaKinds) {
        match p {
            Pattern::Meta(m) => add(&mut out.exprs, m),
            Pattern::Slice(_) => {}
            Pattern::Filter(f) => {
                let _ = f.try_map(|t| -> Result<(), ()> {
                    if let Term::Meta(m) = t {
                        add(&mut out.vertices, m);
                    }
                    Ok(())
                });
            }
            Pattern::MatMul(a, b) | Pattern::Hadamard(a, b) | Pattern::Add(a, b) => {
                go(a, out);
                go(b, out);
            }
            Pattern::Transpose(a) | Pattern::Not(a) | Pattern::Clip(a) => go(a, out),
            Pattern::VOut(a, p) | Pattern::VIn(a, p) => {
                go(a, out);
                if let Term::Meta(m) = p {
                    add(&mut out.ints, m);
                }
            }
            Pattern::Scale(s, a) => {
                if let Term::Meta(m) = s {
                    add(&mut out.scalars, m);
                }
                go(a, out);
            }
        }
    }
    let mut out = MetaKinds::default();
    go(p, &mut out);
    out
}

/// Every assignment of vertex, scalar and integer metavariables over the
/// given domains, expression metavariables left unbound.
pub fn leaf_assignments(k: &MetaKinds, vertices: &[String], scalars: &[f64], ints: &[u64]) -> Vec<Bindings> {
    let mut out = vec![Bindings::default()];
    for v in &k.vertices {
        out = out
            .into_iter()
            .flat_map(|b| {
                vertices.iter().map(move |x| {
                    let mut b = b.clone();
                    b.vertices.insert(v.clone(), x.clone());
                    b
                })
            })
            .collect();
    }
    for s in &k.scalars {
        out = out
            .into_iter()
            .flat_map(|b| {
                scalars.iter().map(move |&x| {
                    let mut b = b.clone();
                    b.scalars.insert(s.clone(), Scalar::new(x).unwrap());
                    b
                })
            })
            .collect();
    }
    for i in &k.ints {
        out = out
            .into_iter()
            .flat_map(|b| {
                ints.iter().map(move |&x| {
                    let mut b = b.clone();
                    b.ints.insert(i.clone(), x);
                    b
                })
            })
            .collect();
    }
    out
}

// ------------------------------------------------------------ marko query

pub struct Bibliography {
    pub tensor: MultiRelTensor,
    pub authored: BTreeSet<(String, String)>,
    pub cites: BTreeSet<(String, String)>,
    pub contains: BTreeSet<(String, String)>,
}

/// Random humans (including `marko`), articles and journals (including
/// `joi`), at most 30 vertices in all.
pub fn random_bibliography(rng: &mut ChaCha8Rng) -> Bibliography {
    let humans: Vec<String> = std::iter::once("marko".to_string())
        .chain((0..rng.gen_range(1..6)).map(|k| format!("h{k}")))
        .collect();
    let journals: Vec<String> = std::iter::once("joi".to_string())
        .chain((0..rng.gen_range(1..4)).map(|k| format!("j{k}")))
        .collect();
    let budget = 30 - humans.len() - journals.len();
    let articles: Vec<String> = (0..rng.gen_range(4..=budget)).map(|k| format!("a{k}")).collect();
    let mut authored = BTreeSet::new();
    let mut cites = BTreeSet::new();
    let mut contains = BTreeSet::new();
    for a in &articles {
        for _ in 0..rng.gen_range(1..=3) {
            authored.insert((humans.choose(rng).unwrap().clone(), a.clone()));
        }
        let j = if rng.gen_bool(0.5) { &journals[0] } else { journals.choose(rng).unwrap() };
        contains.insert((j.clone(), a.clone()));
        for b in &articles {
            if a != b && rng.gen_bool(0.15) {
                cites.insert((a.clone(), b.clone()));
            }
        }
    }
    let mut b = MultiRelTensor::builder();
    for v in humans.iter().chain(&articles).chain(&journals) {
        b.vertex(v);
    }
    for l in ["authored", "cites", "contains"] {
        b.label(l);
    }
    for (l, set) in [("authored", &authored), ("cites", &cites), ("contains", &contains)] {
        for (x, y) in set {
            b.edge(x, l, y);
        }
    }
    Bibliography {
        tensor: b.build().unwrap(),
        authored,
        cites,
        contains,
    }
}

impl Bibliography {
    /// Articles cited by one of marko's articles, not written by marko and
    /// published in joi.
    pub fn answer(&self) -> BTreeSet<String> {
        let by_marko: BTreeSet<&String> = self
            .authored
            .iter()
            .filter(|(h, _)| h == "marko")
            .map(|(_, a)| a)
            .collect();
        self.cites
            .iter()
            .filter(|(a, _)| by_marko.contains(a))
            .map(|(_, b)| b)
            .filter(|b| !by_marko.contains(b))
            .filter(|b| self.contains.contains(&("joi".to_string(), (*b).clone())))
            .cloned()
            .collect()
    }

    /// marko's articles that cite at least one answer.
    pub fn citing_rows(&self) -> BTreeSet<String> {
        let answer = self.answer();
        self.cites
            .iter()
            .filter(|(a, b)| answer.contains(b) && self.authored.contains(&("marko".to_string(), a.clone())))
            .map(|(a, _)| a.clone())
            .collect()
    }
}

/// Diagonal restriction to marko's articles, then citations to articles
/// marko did not write, then diagonal restriction to joi's articles.
pub const MARKO_QUERY: &str = "clip( ((C(marko) & A[authored]') . A[authored] & I) \
    . (A[cites] & not(vout(C(marko) & A[authored]')')) \
    . ((C(joi) & A[contains]') . A[contains] & I) )";

/// The same query ending in the joi column instead of a diagonal.
pub const MARKO_QUERY_JOI_COLUMN: &str = "clip( ((C(marko) & A[authored]') . A[authored] & I) \
    . (A[cites] & not(vout(C(marko) & A[authored]')')) \
    . (C(joi) & A[contains]') )";

pub fn nonzero_columns(z: &pathweave::PathMatrix, t: &MultiRelTensor) -> BTreeSet<String> {
    z.entries().map(|(_, j, _)| t.vertices().name(j).unwrap().to_string()).collect()
}

pub fn nonzero_rows(z: &pathweave::PathMatrix, t: &MultiRelTensor) -> BTreeSet<String> {
    z.entries().map(|(i, _, _)| t.vertices().name(i).unwrap().to_string()).collect()
}

// ------------------------------------------------------------- analysis

pub fn vm_hwm_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}
