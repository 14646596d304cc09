//! Graph-family sweeps of `depth(S*/I(G*)^k)`, the verification suites, and
//! report emission.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certificate::{certificate, verify_certificate};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::graph::{edge_mask_count, enumerate_trees, prufer_decode, SimpleGraph};
use crate::koszul::{depth_with, DepthOptions, Enumeration};
use crate::monomial::{Monomial, MonomialIdeal, DEFAULT_LATTICE_CAP};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Trees,
    Connected,
    Cycles,
    Paths,
    ExplicitFile,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trees" => Ok(Self::Trees),
            "connected" => Ok(Self::Connected),
            "cycles" => Ok(Self::Cycles),
            "paths" => Ok(Self::Paths),
            "explicit-file" => Ok(Self::ExplicitFile),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Depths are computed over every prime; disagreement fails the row.
    pub primes: Vec<u64>,
    pub nmin: usize,
    pub nmax: usize,
    /// Upper end of the power range; `None` means `k <= n`.
    pub kmax: Option<usize>,
    pub family: Family,
    /// Graphs for [`Family::ExplicitFile`].
    pub graphs: Vec<SimpleGraph>,
    pub cap: usize,
    pub enumeration: Enumeration,
    pub format: ReportFormat,
    pub out: Option<PathBuf>,
    pub exec: Execution,
    pub seed: u64,
    /// Random trees drawn by the colon-identity suite.
    pub trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            primes: vec![DEFAULT_PRIME],
            nmin: 1,
            nmax: 4,
            kmax: None,
            family: Family::Trees,
            graphs: Vec::new(),
            cap: DEFAULT_LATTICE_CAP,
            enumeration: Enumeration::Auto,
            format: ReportFormat::Json,
            out: None,
            exec: Execution::Parallel,
            seed: DEFAULT_SEED,
            trials: 50,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<Vec<PrimeField>> {
        if self.primes.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one prime is required".into(),
            ));
        }
        if self.nmin > self.nmax || self.nmin == 0 {
            return Err(Error::InvalidArgument(format!(
                "empty vertex range {}..={}",
                self.nmin, self.nmax
            )));
        }
        if self.kmax == Some(0) {
            return Err(Error::InvalidArgument("kmax must be at least 1".into()));
        }
        if self.cap == 0 {
            return Err(Error::InvalidArgument("cap must be at least 1".into()));
        }
        self.primes.iter().map(|&p| PrimeField::new(p)).collect()
    }

    fn k_limit(&self, n: usize) -> usize {
        self.kmax.map_or(n, |k| k.min(n))
    }
}

/// Graphs of a family on exactly `n` vertices.
pub fn family_graphs(
    family: Family,
    n: usize,
    explicit: &[SimpleGraph],
) -> Result<Vec<SimpleGraph>> {
    Ok(match family {
        Family::Trees => enumerate_trees(n)?,
        Family::Connected => connected_graphs(n)?,
        Family::Cycles => {
            if n >= 3 {
                vec![SimpleGraph::cycle(n)]
            } else {
                Vec::new()
            }
        }
        Family::Paths => vec![SimpleGraph::path(n)],
        Family::ExplicitFile => explicit.iter().filter(|g| g.n() == n).cloned().collect(),
    })
}

/// Every connected labeled graph on `n` vertices (`1 <= n <= 7`).
pub fn connected_graphs(n: usize) -> Result<Vec<SimpleGraph>> {
    if !(1..=7).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "graph size {n} outside 1..=7"
        )));
    }
    Ok((0..edge_mask_count(n))
        .map(|m| SimpleGraph::from_edge_mask(n, m))
        .filter(SimpleGraph::is_connected)
        .collect())
}

/// One point of a depth function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthPoint {
    pub k: usize,
    /// Per-prime depths agree; the common value.
    pub depth: usize,
    /// `n - k + 1` for connected graphs and `k <= n`.
    pub bound: Option<usize>,
    /// Whether the explicit certificate cycle has a nonzero class.
    pub certified: Option<bool>,
    pub primes_agree: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthSeries {
    pub graph: String,
    pub n: usize,
    pub values: Vec<DepthPoint>,
    /// Set when a power exceeded the enumeration capacity; `values` stops
    /// at the last computed power.
    pub truncated: Option<usize>,
}

impl DepthSeries {
    pub fn depths(&self) -> Vec<usize> {
        self.values.iter().map(|p| p.depth).collect()
    }
}

/// `depth(S*/I(G*)^k)` for every prime, or `None` on capacity overflow.
fn depths_over_primes(
    g: &SimpleGraph,
    k: usize,
    fields: &[PrimeField],
    cfg: &ExperimentConfig,
) -> Result<Option<Vec<usize>>> {
    let ideal = g.whisker_ideal().power(k as u32);
    let opts = DepthOptions {
        cap: cfg.cap,
        enumeration: cfg.enumeration,
        exec: cfg.exec,
    };
    let mut out = Vec::with_capacity(fields.len());
    for f in fields {
        match depth_with(&ideal, f, &opts) {
            Ok(r) => out.push(r.depth),
            Err(Error::Capacity { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

fn point(g: &SimpleGraph, k: usize, depths: &[usize], fields: &[PrimeField]) -> Result<DepthPoint> {
    let n = g.n();
    let primes_agree = depths.windows(2).all(|w| w[0] == w[1]);
    let depth = depths[0];
    let bound = (g.is_connected() && k <= n).then(|| n + 1 - k);
    let certified = match bound {
        Some(_) => Some(verify_certificate(&certificate(g, k, fields[0])?)?),
        None => None,
    };
    let pass = primes_agree && depth <= 2 * n && bound.is_none_or(|b| depth <= b);
    Ok(DepthPoint {
        k,
        depth,
        bound,
        certified,
        primes_agree,
        pass,
    })
}

/// The depth of `S*/I(G*)^k` with its bound and certificate, or `None`
/// when the enumeration capacity is exceeded.
pub fn depth_point(
    g: &SimpleGraph,
    k: usize,
    cfg: &ExperimentConfig,
) -> Result<Option<DepthPoint>> {
    if k == 0 {
        return Err(Error::InvalidArgument("powers start at 1".into()));
    }
    let fields = cfg.validate()?;
    match depths_over_primes(g, k, &fields, cfg)? {
        Some(d) => Ok(Some(point(g, k, &d, &fields)?)),
        None => Ok(None),
    }
}

/// Depths of `S*/I(G*)^k` for `k = 1..=kmax`, with the certified bound
/// where `G` is connected and `k <= n`.
pub fn depth_series(g: &SimpleGraph, kmax: usize, cfg: &ExperimentConfig) -> Result<DepthSeries> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let mut values = Vec::new();
    let mut truncated = None;
    for k in 1..=kmax {
        match depth_point(g, k, cfg)? {
            Some(p) => values.push(p),
            None => {
                truncated = Some(k);
                break;
            }
        }
    }
    Ok(DepthSeries {
        graph: g.id(),
        n: g.n(),
        values,
        truncated,
    })
}

/// Depths keyed by isomorphism class, computed once per class. Depth is
/// invariant under relabeling, so labeled graphs share their class value.
struct DepthTable {
    values: HashMap<(usize, u64, usize), Option<Vec<usize>>>,
}

impl DepthTable {
    fn build(
        jobs: &[(SimpleGraph, usize)],
        fields: &[PrimeField],
        cfg: &ExperimentConfig,
    ) -> Result<Self> {
        let keys: BTreeSet<(usize, u64, usize)> = jobs
            .iter()
            .map(|(g, k)| (g.n(), g.canonical_form().edge_mask(), *k))
            .collect();
        let keys: Vec<_> = keys.into_iter().collect();
        let computed = exec::map(cfg.exec, &keys, |&(n, mask, k)| {
            depths_over_primes(&SimpleGraph::from_edge_mask(n, mask), k, fields, cfg)
        });
        let mut values = HashMap::new();
        for (key, v) in keys.into_iter().zip(computed) {
            values.insert(key, v?);
        }
        Ok(Self { values })
    }

    fn get(&self, g: &SimpleGraph, k: usize) -> Option<&[usize]> {
        self.values
            .get(&(g.n(), g.canonical_form().edge_mask(), k))
            .and_then(|v| v.as_deref())
    }
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub graph: String,
    pub k: usize,
    pub depth: Option<usize>,
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    /// Observational suites never fail a run.
    pub assertive: bool,
    pub reproducers: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<String>,
}

impl SuiteSummary {
    fn new(name: &str, assertive: bool) -> Self {
        Self {
            name: name.to_string(),
            checks: 0,
            passed: 0,
            failed: 0,
            assertive,
            reproducers: Vec::new(),
            observations: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, reproducer: impl FnOnce() -> String) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.reproducers.push(reproducer());
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub results: Vec<ResultRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteSummary>,
}

impl Report {
    pub fn from_series(series: &[DepthSeries]) -> Self {
        let mut results = Vec::new();
        for s in series {
            for p in &s.values {
                results.push(ResultRow {
                    suite: None,
                    graph: s.graph.clone(),
                    k: p.k,
                    depth: Some(p.depth),
                    bound: p.bound,
                    expected: None,
                    certified: p.certified,
                    pass: p.pass,
                    note: (!p.primes_agree).then(|| "depth differs between primes".to_string()),
                });
            }
            if let Some(k) = s.truncated {
                results.push(ResultRow {
                    suite: None,
                    graph: s.graph.clone(),
                    k,
                    depth: None,
                    bound: None,
                    expected: None,
                    certified: None,
                    pass: true,
                    note: Some("truncated: enumeration capacity exceeded".into()),
                });
            }
        }
        let mut r = Self {
            results,
            suites: Vec::new(),
        };
        r.sort();
        r
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
            && self.suites.iter().all(|s| !s.assertive || s.failed == 0)
    }

    fn sort(&mut self) {
        self.results
            .sort_by(|a, b| (&a.suite, &a.graph, a.k).cmp(&(&b.suite, &b.graph, b.k)));
        self.suites.sort_by(|a, b| a.name.cmp(&b.name));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// `depth = n - k + 1` for trees.
    Tree,
    /// `depth <= n - k + 1` and the certificate cycle, connected graphs.
    Whisker,
    /// Stabilization at `k >= n` for `n <= 3`.
    Limit,
    /// Colon identities on seeded random trees.
    Colon,
    /// Depth plateaus of forests against the conjectured formula.
    Forest,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Tree => "tree",
            Suite::Whisker => "whisker",
            Suite::Limit => "limit",
            Suite::Colon => "colon",
            Suite::Forest => "forest",
        }
    }
}

pub fn run_verification_suite(cfg: &ExperimentConfig, suites: &[Suite]) -> Result<Report> {
    let fields = cfg.validate()?;
    let mut report = Report::default();
    let suites: BTreeSet<Suite> = suites.iter().copied().collect();
    for suite in suites {
        match suite {
            Suite::Tree => tree_suite(cfg, &fields, &mut report)?,
            Suite::Whisker => whisker_suite(cfg, &fields, &mut report)?,
            Suite::Limit => limit_suite(cfg, &fields, &mut report)?,
            Suite::Colon => report.suites.push(colon_suite(cfg)?),
            Suite::Forest => report.suites.push(forest_probe(cfg, &fields)?),
        }
    }
    report.sort();
    Ok(report)
}

fn row(suite: Suite, g: &SimpleGraph, k: usize, depth: Option<&[usize]>) -> ResultRow {
    ResultRow {
        suite: Some(suite.name().to_string()),
        graph: g.id(),
        k,
        depth: depth.map(|d| d[0]),
        bound: None,
        expected: None,
        certified: None,
        pass: false,
        note: None,
    }
}

fn depth_check(r: &mut ResultRow, depths: Option<&[usize]>, ok: impl Fn(usize) -> bool) {
    match depths {
        None => r.note = Some("truncated: enumeration capacity exceeded".into()),
        Some(d) if d.windows(2).any(|w| w[0] != w[1]) => {
            r.note = Some("depth differs between primes".into())
        }
        Some(d) => r.pass = ok(d[0]),
    }
}

fn tree_suite(cfg: &ExperimentConfig, fields: &[PrimeField], report: &mut Report) -> Result<()> {
    let mut jobs = Vec::new();
    for n in cfg.nmin..=cfg.nmax {
        for t in enumerate_trees(n)? {
            for k in 1..=cfg.k_limit(n) {
                jobs.push((t.clone(), k));
            }
        }
    }
    let table = DepthTable::build(&jobs, fields, cfg)?;
    let mut summary = SuiteSummary::new(Suite::Tree.name(), true);
    for (t, k) in &jobs {
        let expected = t.n() + 1 - k;
        let d = table.get(t, *k);
        let mut r = row(Suite::Tree, t, *k, d);
        r.expected = Some(expected);
        r.bound = Some(expected);
        depth_check(&mut r, d, |d| d == expected);
        summary.record(r.pass, || {
            format!(
                "tree {} k={k}: depth {:?}, expected {expected}",
                t.id(),
                r.depth
            )
        });
        report.results.push(r);
    }
    report.suites.push(summary);
    Ok(())
}

fn whisker_suite(cfg: &ExperimentConfig, fields: &[PrimeField], report: &mut Report) -> Result<()> {
    let mut jobs = Vec::new();
    for n in cfg.nmin..=cfg.nmax {
        for g in family_graphs(cfg.family, n, &cfg.graphs)? {
            if !g.is_connected() {
                continue;
            }
            for k in 1..=cfg.k_limit(n) {
                jobs.push((g.clone(), k));
            }
        }
    }
    let table = DepthTable::build(&jobs, fields, cfg)?;
    let verdicts = exec::map(cfg.exec, &jobs, |(g, k)| {
        certificate(g, *k, fields[0]).and_then(|c| verify_certificate(&c))
    });
    let mut bounds = SuiteSummary::new("whisker-bound", true);
    let mut certs = SuiteSummary::new("whisker-certificate", true);
    for ((g, k), verdict) in jobs.iter().zip(verdicts) {
        let verdict = verdict?;
        let bound = g.n() + 1 - k;
        let d = table.get(g, *k);
        let mut r = row(Suite::Whisker, g, *k, d);
        r.bound = Some(bound);
        r.certified = Some(verdict);
        depth_check(&mut r, d, |d| d <= bound);
        bounds.record(r.pass, || {
            format!("graph {} k={k}: depth {:?} above {bound}", g.id(), r.depth)
        });
        certs.record(verdict, || {
            format!("certificate {} k={k} is a boundary", g.id())
        });
        report.results.push(r);
    }
    report.suites.push(bounds);
    report.suites.push(certs);
    Ok(())
}

/// Largest `n` for which the stabilization check runs.
pub const LIMIT_NMAX: usize = 3;

fn limit_suite(cfg: &ExperimentConfig, fields: &[PrimeField], report: &mut Report) -> Result<()> {
    let mut jobs = Vec::new();
    for n in cfg.nmin..=cfg.nmax.min(LIMIT_NMAX) {
        for g in connected_graphs(n)? {
            for k in n..=n + 2 {
                jobs.push((g.clone(), k));
            }
        }
    }
    let table = DepthTable::build(&jobs, fields, cfg)?;
    let mut summary = SuiteSummary::new(Suite::Limit.name(), true);
    for (g, k) in &jobs {
        let expected = usize::from(g.is_bipartite());
        let d = table.get(g, *k);
        let mut r = row(Suite::Limit, g, *k, d);
        r.expected = Some(expected);
        r.bound = (*k <= g.n()).then(|| g.n() + 1 - k);
        depth_check(&mut r, d, |d| d == expected);
        summary.record(r.pass, || {
            format!(
                "graph {} k={k}: depth {:?}, expected {expected}",
                g.id(),
                r.depth
            )
        });
        report.results.push(r);
    }
    report.suites.push(summary);
    Ok(())
}

/// A seeded random labeled tree on `n` vertices.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> SimpleGraph {
    match n {
        0 | 1 => SimpleGraph::empty(n),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(n, &seq)
        }
    }
}

/// Relabels a tree so that vertex `n` is a leaf and `n - 1` its neighbor.
pub fn with_free_vertex_last(t: &SimpleGraph) -> Result<SimpleGraph> {
    let n = t.n();
    let leaf = (0..n)
        .find(|&v| t.degree(v) == 1)
        .ok_or_else(|| Error::Precondition("tree has no leaf".into()))?;
    let parent = t.neighbors(leaf).trailing_zeros() as usize;
    let mut perm = vec![0; n];
    perm[leaf] = n - 1;
    perm[parent] = n - 2;
    let mut next = 0;
    for (v, p) in perm.iter_mut().enumerate() {
        if v != leaf && v != parent {
            *p = next;
            next += 1;
        }
    }
    t.permute(&perm)
}

/// Outcome of the colon identities for one tree and power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColonCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// The identities behind the tree lower bound, for a tree whose vertex `n`
/// is a leaf attached to `n - 1`. With `I = I(G*)`, `J = I|_{x_n = 0}` and
/// `L = J|_{x_{n-1} = 0}`:
/// * `(J^k, x_{n-1}x_n) : x_n = (L^k, x_{n-1})`
/// * `(J^k, x_{n-1}x_n) : x_n y_n = (L^k, x_{n-1})`
/// * `(J, x_{n-1}x_n)^k : x_{n-1}x_n = (J, x_{n-1}x_n)^(k-1)`
/// * `(I^k, x_n y_n) = (J, x_{n-1}x_n)^k + (x_n y_n)`
/// * `(I^k, x_n y_n) : x_{n-1}x_n = (J, x_{n-1}x_n)^(k-1) + (y_n)`
pub fn colon_identities(t: &SimpleGraph, k: u32) -> Result<Vec<ColonCheck>> {
    let n = t.n();
    if n < 2 || t.degree(n - 1) != 1 || !t.has_edge(n - 2, n - 1) {
        return Err(Error::Precondition(
            "vertex n must be a leaf attached to n - 1".into(),
        ));
    }
    let i = t.whisker_ideal();
    let nv = 2 * n;
    let (xn, xn1, yn) = (n - 1, n - 2, 2 * n - 1);
    let mono = |vars: &[usize]| Monomial::product_of(nv, vars.iter().copied());
    let j = i.substitute_zero(xn)?;
    let l = j.substitute_zero(xn1)?;
    let edge = mono(&[xn1, xn]);
    let whisker = mono(&[xn, yn]);
    let jk_edge = j.power(k).with_generator(edge.clone());
    let lk_x = l.power(k).with_generator(mono(&[xn1]));
    let j_edge = j.with_generator(edge.clone());
    let ik_whisker = i.power(k).with_generator(whisker.clone());
    let lower = |m: u32| -> MonomialIdeal { j_edge.power(m) };
    let below = lower(k.saturating_sub(1));

    Ok(vec![
        ColonCheck {
            name: "colon-xn",
            holds: jk_edge.colon(&mono(&[xn]))? == lk_x,
        },
        ColonCheck {
            name: "colon-xn-yn",
            holds: jk_edge.colon(&whisker)? == lk_x,
        },
        ColonCheck {
            name: "morey",
            holds: k == 0 || lower(k).colon(&edge)? == below,
        },
        ColonCheck {
            name: "power-split",
            holds: ik_whisker == lower(k).with_generator(whisker),
        },
        ColonCheck {
            name: "colon-edge",
            holds: k == 0 || ik_whisker.colon(&edge)? == below.with_generator(mono(&[yn])),
        },
    ])
}

/// Largest power checked by the colon suite.
pub const COLON_KMAX: usize = 3;

fn colon_suite(cfg: &ExperimentConfig) -> Result<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lo = cfg.nmin.max(2);
    let hi = cfg.nmax.max(lo);
    let trees: Vec<SimpleGraph> = (0..cfg.trials)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            with_free_vertex_last(&random_tree(&mut rng, n))
        })
        .collect::<Result<_>>()?;
    let kmax = cfg.kmax.unwrap_or(COLON_KMAX);
    let checks = exec::map(cfg.exec, &trees, |t| {
        (1..=kmax as u32)
            .map(|k| colon_identities(t, k).map(|c| (k, c)))
            .collect::<Result<Vec<_>>>()
    });
    let mut summary = SuiteSummary::new(Suite::Colon.name(), true);
    for (t, per_k) in trees.iter().zip(checks) {
        for (k, list) in per_k? {
            for c in list {
                summary.record(c.holds, || {
                    format!("tree {} k={k} identity {}", t.id(), c.name)
                });
            }
        }
    }
    Ok(summary)
}

/// Conjectured depth for a forest with `m` components.
pub fn forest_conjecture(n: usize, m: usize, k: usize) -> usize {
    if k + m <= n + 1 {
        n + 1 - k
    } else {
        m
    }
}

/// Largest `n` probed for forests.
pub const FOREST_NMAX: usize = 4;

fn forest_probe(cfg: &ExperimentConfig, fields: &[PrimeField]) -> Result<SuiteSummary> {
    let mut classes: BTreeSet<(usize, u64)> = BTreeSet::new();
    for n in cfg.nmin.max(2)..=cfg.nmax.min(FOREST_NMAX) {
        for m in 0..edge_mask_count(n) {
            let g = SimpleGraph::from_edge_mask(n, m);
            if g.is_acyclic() && g.component_count() >= 2 {
                classes.insert((n, g.canonical_form().edge_mask()));
            }
        }
    }
    let mut jobs = Vec::new();
    for &(n, mask) in &classes {
        for k in 1..=n {
            jobs.push((SimpleGraph::from_edge_mask(n, mask), k));
        }
    }
    let table = DepthTable::build(&jobs, fields, cfg)?;
    let mut summary = SuiteSummary::new(Suite::Forest.name(), false);
    for &(n, mask) in &classes {
        let g = SimpleGraph::from_edge_mask(n, mask);
        let m = g.component_count();
        let observed: Vec<Option<usize>> =
            (1..=n).map(|k| table.get(&g, k).map(|d| d[0])).collect();
        let conjectured: Vec<usize> = (1..=n).map(|k| forest_conjecture(n, m, k)).collect();
        let matches = observed
            .iter()
            .zip(&conjectured)
            .all(|(o, c)| o.is_none_or(|o| o == *c));
        summary.record(matches, || format!("forest {} m={m}", g.id()));
        let fmt = |v: Vec<String>| v.join(",");
        summary.observations.push(format!(
            "{} m={m} depths [{}] conjectured [{}] plateau {}",
            g.id(),
            fmt(observed
                .iter()
                .map(|o| o.map_or("?".into(), |d| d.to_string()))
                .collect()),
            fmt(conjectured.iter().map(|c| c.to_string()).collect()),
            observed
                .last()
                .copied()
                .flatten()
                .map_or("?".into(), |d| d.to_string()),
        ));
    }
    Ok(summary)
}

/// Serializes a report. JSON is the canonical format; CSV carries the
/// result rows only.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| Error::Internal(format!("json serialization failed: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let cell = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
            let io = |e: csv::Error| Error::Internal(format!("csv serialization failed: {e}"));
            w.write_record(["graph", "k", "depth", "bound", "pass"])
                .map_err(io)?;
            for r in &report.results {
                w.write_record([
                    r.graph.clone(),
                    r.k.to_string(),
                    cell(r.depth),
                    cell(r.bound),
                    r.pass.to_string(),
                ])
                .map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Internal(format!("csv serialization failed: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
        ReportFormat::Text => Ok(text_report(report)),
    }
}

fn text_report(report: &Report) -> String {
    let mut s = String::new();
    if !report.results.is_empty() {
        let width = report
            .results
            .iter()
            .map(|r| r.graph.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let _ = writeln!(
            s,
            "{:<width$}  {:>3}  {:>5}  {:>5}  pass",
            "graph", "k", "depth", "bound"
        );
        for r in &report.results {
            let cell = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            let _ = write!(
                s,
                "{:<width$}  {:>3}  {:>5}  {:>5}  {}",
                r.graph,
                r.k,
                cell(r.depth),
                cell(r.bound),
                if r.pass { "yes" } else { "NO" }
            );
            if let Some(c) = r.certified {
                let _ = write!(s, "  certified={c}");
            }
            if let Some(note) = &r.note {
                let _ = write!(s, "  ({note})");
            }
            s.push('\n');
        }
    }
    for suite in &report.suites {
        let _ = writeln!(
            s,
            "suite {}: {}/{} passed{}",
            suite.name,
            suite.passed,
            suite.checks,
            if suite.assertive {
                ""
            } else {
                " (observational)"
            }
        );
        for r in &suite.reproducers {
            let _ = writeln!(s, "  failed: {r}");
        }
        for o in &suite.observations {
            let _ = writeln!(s, "  {o}");
        }
    }
    if s.is_empty() {
        s.push_str("no results\n");
    }
    s
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            exec: Execution::Sequential,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn golden_series() {
        let c3 = depth_series(&SimpleGraph::cycle(3), 4, &cfg()).unwrap();
        assert_eq!(c3.depths(), vec![3, 0, 0, 0]);
        assert!(c3.values.iter().all(|p| p.pass));
        assert_eq!(c3.values[3].bound, None);
        let c4 = depth_series(&SimpleGraph::cycle(4), 3, &cfg()).unwrap();
        assert_eq!(c4.depths(), vec![4, 3, 1]);
    }

    #[test]
    fn truncation_is_marked() {
        let strict = ExperimentConfig {
            cap: 20,
            enumeration: Enumeration::Lattice,
            ..cfg()
        };
        // 8 lcm-lattice elements for k = 1, more than 20 for k = 2
        let s = depth_series(&SimpleGraph::path(2), 3, &strict).unwrap();
        assert_eq!(s.depths(), vec![2]);
        assert_eq!(s.truncated, Some(2));
        let rows = Report::from_series(&[s]).results;
        assert_eq!(rows.last().unwrap().depth, None);

        // the exponent-box fallback recovers under the same cap
        let auto = ExperimentConfig { cap: 20, ..cfg() };
        let s = depth_series(&SimpleGraph::path(2), 3, &auto).unwrap();
        assert_eq!(s.depths(), vec![2, 1, 1]);
        assert_eq!(s.truncated, None);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.primes.clear();
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.primes = vec![4];
        assert!(matches!(c.validate(), Err(Error::NotPrime(4))));
        let mut c = cfg();
        c.nmin = 5;
        c.nmax = 3;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.cap = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn empty_report_is_valid_json() {
        let s = emit_report(&Report::default(), ReportFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, serde_json::json!({"results": []}));
        assert_eq!(
            emit_report(&Report::default(), ReportFormat::Csv).unwrap(),
            "graph,k,depth,bound,pass\n"
        );
    }

    #[test]
    fn csv_quotes_graph_ids() {
        let s = depth_series(&SimpleGraph::cycle(3), 4, &cfg()).unwrap();
        let csv = emit_report(&Report::from_series(&[s]), ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "\"n3:1-2,1-3,2-3\",1,3,3,true");
        assert_eq!(lines[4], "\"n3:1-2,1-3,2-3\",4,0,,true");
    }

    #[test]
    fn colon_identities_on_a_path() {
        let t = SimpleGraph::path(4);
        for k in 1..=3 {
            for c in colon_identities(&t, k).unwrap() {
                assert!(c.holds, "{} k={k}", c.name);
            }
        }
        assert!(colon_identities(&SimpleGraph::cycle(3), 1).is_err());
    }

    #[test]
    fn free_vertex_relabeling() {
        let star = SimpleGraph::from_labeled_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let t = with_free_vertex_last(&star).unwrap();
        assert_eq!(t.degree(3), 1);
        assert!(t.has_edge(2, 3));
    }

    #[test]
    fn forest_formula_meets_at_the_boundary() {
        // both branches give m at k = n - m + 1
        for n in 2..6 {
            for m in 1..=n {
                assert_eq!(forest_conjecture(n, m, n - m + 1), m);
            }
        }
    }

    #[test]
    fn suite_report_schema() {
        let c = ExperimentConfig {
            nmin: 3,
            nmax: 3,
            ..cfg()
        };
        let r = run_verification_suite(&c, &[Suite::Tree]).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.results.len(), 3 * 3);
        let v: serde_json::Value =
            serde_json::from_str(&emit_report(&r, ReportFormat::Json).unwrap()).unwrap();
        assert_eq!(v["suites"][0]["name"], "tree");
        assert_eq!(v["suites"][0]["passed"], 9);
        assert_eq!(v["suites"][0]["reproducers"], serde_json::json!([]));
    }
}
