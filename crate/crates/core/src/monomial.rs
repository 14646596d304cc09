//! Exponent-vector monomials and monomial ideals.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Hard limit on the number of variables; Koszul index sets are bitmasks.
pub const MAX_VARIABLES: usize = 64;

/// Default capacity for [`MonomialIdeal::lcm_lattice`].
pub const DEFAULT_LATTICE_CAP: usize = 200_000;

/// Names of the variables of a polynomial ring, optionally remembering how
/// they arose from polarizing a smaller ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    labels: Vec<String>,
    /// `polarization[i]` lists the variables `x_{i1}, .., x_{ic_i}` that
    /// original variable `i` was split into, in order.
    polarization: Option<Vec<Vec<usize>>>,
}

impl VariableSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_VARIABLES {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_VARIABLES} variables are supported, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || !l.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidArgument(format!("bad variable name {l:?}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate variable {l}")));
            }
        }
        Ok(Self {
            labels,
            polarization: None,
        })
    }

    /// `x1, .., xn`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("valid indexed labels")
    }

    /// `x1, .., xn, y1, .., yn`: the ring of a whisker graph on `n` vertices.
    pub fn whisker(n: usize) -> Self {
        Self::new(
            (1..=n)
                .map(|i| format!("x{i}"))
                .chain((1..=n).map(|i| format!("y{i}"))),
        )
        .expect("valid whisker labels")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn polarization_map(&self) -> Option<&[Vec<usize>]> {
        self.polarization.as_deref()
    }

    /// Appends a variable with a name not yet in use, derived from `stem`.
    pub fn with_fresh_variable(&self, stem: &str) -> (Self, usize) {
        let mut name = stem.to_string();
        let mut t = 1;
        while self.index_of(&name).is_some() {
            name = format!("{stem}{t}");
            t += 1;
        }
        let mut labels = self.labels.clone();
        labels.push(name);
        let space = Self::new(labels).expect("fresh label is valid");
        (space, self.len())
    }
}

/// A monomial `x^a`, stored as its exponent vector. The derived order is the
/// lexicographic order on exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 16]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Self(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Self(SmallVec::from_slice(exps))
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut m = Self::unit(nvars);
        m.0[i] = 1;
        m
    }

    /// Squarefree monomial on the variables in `vars`.
    pub fn product_of(nvars: usize, vars: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::unit(nvars);
        for v in vars {
            m.0[v] += 1;
        }
        m
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    #[inline]
    pub fn degree_in(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// Bitmask of the variables occurring in the monomial.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| {
            Monomial(
                self.0
                    .iter()
                    .zip(other.0.iter())
                    .map(|(a, b)| a - b)
                    .collect(),
            )
        })
    }

    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        (self.0[i] > 0).then(|| {
            let mut m = self.clone();
            m.0[i] -= 1;
            m
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Drops variable `i`; the exponent there must already be zero or is lost.
    pub fn remove_variable(&self, i: usize) -> Monomial {
        let mut m = self.0.clone();
        m.remove(i);
        Monomial(m)
    }

    pub fn with_extra_variables(&self, extra: usize) -> Monomial {
        let mut m = self.0.clone();
        m.extend(std::iter::repeat_n(0, extra));
        Monomial(m)
    }

    /// The polarization `prod_i x_{i1} .. x_{i a_i}` in the space described
    /// by `map` (see [`VariableSpace::polarization_map`]).
    pub fn polarize(&self, map: &[Vec<usize>], target_nvars: usize) -> Result<Monomial> {
        let mut out = Monomial::unit(target_nvars);
        for (i, &a) in self.0.iter().enumerate() {
            let slots = &map[i];
            if a as usize > slots.len() {
                return Err(Error::Precondition(format!(
                    "exponent {a} of variable {} exceeds polarization bound {}",
                    i + 1,
                    slots.len()
                )));
            }
            for &v in &slots[..a as usize] {
                out.0[v] = 1;
            }
        }
        Ok(out)
    }

    pub fn to_text(&self, space: &VariableSpace) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(space.label(i));
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Parses `x1^2*x2` style text; `1` is the unit monomial.
    pub fn parse(text: &str, space: &VariableSpace) -> std::result::Result<Monomial, String> {
        let text = text.trim();
        let mut m = Monomial::unit(space.len());
        if text == "1" {
            return Ok(m);
        }
        for tok in text.split('*') {
            let tok = tok.trim();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u16>()
                        .map_err(|_| format!("bad exponent in {tok:?}"))?,
                ),
                None => (tok, 1),
            };
            let i = space
                .index_of(name)
                .ok_or_else(|| format!("unknown variable {name:?}"))?;
            m.0[i] = m.0[i]
                .checked_add(exp)
                .ok_or_else(|| format!("exponent overflow in {tok:?}"))?;
        }
        Ok(m)
    }
}

/// A monomial ideal given by its minimal generators, sorted
/// lexicographically. The zero ideal has no generators; the unit ideal has
/// the single generator 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    space: Arc<VariableSpace>,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// The divisibility-minimal subset of `gens`, as an ideal.
    pub fn minimalize(
        space: impl Into<Arc<VariableSpace>>,
        gens: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self> {
        let space = space.into();
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        for g in &all {
            if g.nvars() != space.len() {
                return Err(Error::DimensionMismatch {
                    expected: space.len(),
                    found: g.nvars(),
                });
            }
        }
        Ok(Self {
            space,
            generators: minimal_subset(&mut all),
        })
    }

    pub fn zero(space: impl Into<Arc<VariableSpace>>) -> Self {
        Self {
            space: space.into(),
            generators: Vec::new(),
        }
    }

    pub fn unit(space: impl Into<Arc<VariableSpace>>) -> Self {
        let space = space.into();
        let one = Monomial::unit(space.len());
        Self {
            space,
            generators: vec![one],
        }
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.space.len()
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_unit()
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(Monomial::is_squarefree)
    }

    #[inline]
    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    fn rebuild(&self, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        Self {
            space: self.space.clone(),
            generators: minimal_subset(&mut all),
        }
    }

    fn check_same_space(&self, other: &MonomialIdeal) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.rebuild(self.generators.iter().chain(&other.generators).cloned()))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.rebuild(
            self.generators
                .iter()
                .flat_map(|a| other.generators.iter().map(move |b| a.mul(b))),
        ))
    }

    /// `self + (m)`.
    pub fn with_generator(&self, m: Monomial) -> Self {
        self.rebuild(self.generators.iter().cloned().chain(std::iter::once(m)))
    }

    /// Minimal generators of `I^k`, built from k-fold generator products with
    /// pruning after every factor. `I^0` is the unit ideal.
    pub fn power(&self, k: u32) -> Self {
        let mut acc = Self::unit(self.space.clone());
        for _ in 0..k {
            acc = acc.product(self).expect("same space");
        }
        acc
    }

    /// `I : m`, generated by `u / gcd(u, m)` over the generators `u`.
    pub fn colon(&self, m: &Monomial) -> Result<Self> {
        if m.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: m.nvars(),
            });
        }
        Ok(self.rebuild(
            self.generators
                .iter()
                .map(|u| u.checked_div(&u.gcd(m)).expect("gcd divides")),
        ))
    }

    /// Sets variable `v` to zero: drops every generator divisible by it.
    pub fn substitute_zero(&self, v: usize) -> Result<Self> {
        if v >= self.nvars() {
            return Err(Error::InvalidArgument(format!(
                "variable index {v} out of range for {} variables",
                self.nvars()
            )));
        }
        Ok(Self {
            space: self.space.clone(),
            generators: self
                .generators
                .iter()
                .filter(|g| g.degree_in(v) == 0)
                .cloned()
                .collect(),
        })
    }

    /// `c_i = max { deg_{x_i} u : u in G(I) }`.
    pub fn max_degrees(&self) -> Vec<u16> {
        let mut c = vec![0; self.nvars()];
        for g in &self.generators {
            for (ci, &e) in c.iter_mut().zip(g.exponents()) {
                *ci = (*ci).max(e);
            }
        }
        c
    }

    /// The polarization of the ideal. Variable `x_i` is split into
    /// `x_{i1}, .., x_{ic_i}`, ordered `x_{11}, .., x_{1c_1}, x_{21}, ..`;
    /// variables with `c_i = 0` do not survive.
    pub fn polarize(&self) -> (MonomialIdeal, VariableSpace) {
        let c = self.max_degrees();
        let mut labels = Vec::new();
        let mut map = Vec::with_capacity(c.len());
        for (i, &ci) in c.iter().enumerate() {
            let slots: Vec<usize> = (0..ci as usize)
                .map(|j| {
                    labels.push(format!("{}_{}", self.space.label(i), j + 1));
                    labels.len() - 1
                })
                .collect();
            map.push(slots);
        }
        let mut space = VariableSpace::new(labels).expect("polarized labels are valid");
        space.polarization = Some(map);
        let target = space.len();
        let map = space.polarization.as_ref().unwrap();
        let gens: Vec<Monomial> = self
            .generators
            .iter()
            .map(|g| {
                g.polarize(map, target)
                    .expect("generator degrees bounded by c")
            })
            .collect();
        let ideal = MonomialIdeal::minimalize(space.clone(), gens).expect("same space");
        (ideal, space)
    }

    /// 1-step polarization with respect to `x_i`: every generator divisible
    /// by `x_i^2` is replaced by `(u / x_i) y` for a fresh variable `y`,
    /// appended as the last variable.
    pub fn one_step_polarize(&self, i: usize) -> Result<(MonomialIdeal, VariableSpace)> {
        if i >= self.nvars() {
            return Err(Error::InvalidArgument(format!(
                "variable index {i} out of range"
            )));
        }
        let stem = format!("{}_p", self.space.label(i));
        let (space, y) = self.space.with_fresh_variable(&stem);
        let gens = self.generators.iter().map(|u| {
            let u = u.with_extra_variables(1);
            if u.degree_in(i) >= 2 {
                u.div_var(i).unwrap().mul_var(y)
            } else {
                u
            }
        });
        let ideal = MonomialIdeal::minimalize(space.clone(), gens)?;
        Ok((ideal, space))
    }

    /// Moves the ideal into `space` via `var_map[old] = new`.
    pub fn rename(&self, space: impl Into<Arc<VariableSpace>>, var_map: &[usize]) -> Result<Self> {
        let space = space.into();
        if var_map.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: var_map.len(),
            });
        }
        let n = space.len();
        let gens = self.generators.iter().map(|g| {
            let mut m = Monomial::unit(n);
            for (old, &e) in g.exponents().iter().enumerate() {
                m.0[var_map[old]] += e;
            }
            m
        });
        MonomialIdeal::minimalize(space, gens)
    }

    /// All least common multiples of subsets of `G(I)` (the empty subset
    /// gives 1), sorted. Fails once more than `cap` elements are found.
    pub fn lcm_lattice(&self, cap: usize) -> Result<Vec<Monomial>> {
        let mut seen: HashSet<Monomial> = HashSet::new();
        seen.insert(Monomial::unit(self.nvars()));
        let mut frontier: Vec<Monomial> = Vec::new();
        for g in &self.generators {
            if seen.insert(g.clone()) {
                frontier.push(g.clone());
            }
        }
        // joining with single generators suffices: lcm(A) for |A| = j+1 is
        // lcm(lcm(A'), g) with |A'| = j
        while let Some(m) = frontier.pop() {
            for g in &self.generators {
                let l = m.lcm(g);
                if l != m && !seen.contains(&l) {
                    if seen.len() >= cap {
                        return Err(Error::Capacity { cap });
                    }
                    seen.insert(l.clone());
                    frontier.push(l);
                }
            }
        }
        if seen.len() > cap {
            return Err(Error::Capacity { cap });
        }
        let mut out: Vec<Monomial> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Candidate degrees from the per-variable exponent values
    /// `{0} ∪ {deg_{x_j} u : u in G(I)}`.
    pub fn exponent_box(&self) -> ExponentBox {
        let values = (0..self.nvars())
            .map(|j| {
                let set: BTreeSet<u16> = std::iter::once(0)
                    .chain(self.generators.iter().map(|g| g.degree_in(j)))
                    .collect();
                set.into_iter().collect()
            })
            .collect();
        ExponentBox { values }
    }

    /// Text form: a `vars:` header followed by one generator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("vars: {}\n", self.space.labels().join(" "));
        for g in &self.generators {
            s.push_str(&g.to_text(&self.space));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut space: Option<VariableSpace> = None;
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            if let Some(rest) = line.strip_prefix("vars:") {
                if space.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "duplicate vars header".into(),
                    });
                }
                space = Some(VariableSpace::new(rest.split_whitespace()).map_err(|e| {
                    Error::Parse {
                        line: lineno,
                        msg: e.to_string(),
                    }
                })?);
                continue;
            }
            let sp = space.as_ref().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "generator before `vars:` header".into(),
            })?;
            gens.push(Monomial::parse(line, sp).map_err(|msg| Error::Parse { line: lineno, msg })?);
        }
        let space = space.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `vars:` header".into(),
        })?;
        MonomialIdeal::minimalize(space, gens)
    }

    /// One-line display, e.g. `(x1^2*x2, x1*x2^2)`.
    pub fn display(&self) -> String {
        let body: Vec<String> = self
            .generators
            .iter()
            .map(|g| g.to_text(&self.space))
            .collect();
        format!("({})", body.join(", "))
    }
}

impl std::fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display())
    }
}

fn minimal_subset(all: &mut Vec<Monomial>) -> Vec<Monomial> {
    // a divisor has no larger total degree, so scanning by degree keeps only
    // the minimal elements
    all.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.cmp(b)));
    all.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for m in all.drain(..) {
        if !kept.iter().any(|k| k.divides(&m)) {
            kept.push(m);
        }
    }
    kept.sort();
    kept
}

/// The product set `values[0] x values[1] x ..`, indexable so that it can be
/// walked in parallel.
#[derive(Debug, Clone)]
pub struct ExponentBox {
    values: Vec<Vec<u16>>,
}

impl ExponentBox {
    pub fn len(&self) -> u64 {
        self.values.iter().map(|v| v.len() as u64).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Mixed-radix decoding, last variable fastest (lexicographic order).
    pub fn get(&self, mut idx: u64) -> Monomial {
        let mut exps = vec![0u16; self.values.len()];
        for (j, vals) in self.values.iter().enumerate().rev() {
            let r = vals.len() as u64;
            exps[j] = vals[(idx % r) as usize];
            idx /= r;
        }
        Monomial::from_exponents(&exps)
    }
}
