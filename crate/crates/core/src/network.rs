//! Reaction networks, their split graph, generator and weight matrices, and scale assignments.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mag::{floor_log, Mag, Scale};

/// A kinetic rate as written in a network file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSpec {
    /// Explicit positive value.
    Value(f64),
    /// Rate `b^n` for an integer scale `n`.
    Scale(i64),
}

impl RateSpec {
    /// Resolves the rate into a magnitude in base `b`.
    pub fn magnitude(&self, base: f64) -> Mag {
        match *self {
            RateSpec::Value(v) => Mag::from_value(v, base),
            RateSpec::Scale(n) => Mag::from_scale(Some(n), base),
        }
    }

    /// Numerical value of the rate.
    pub fn value(&self, base: f64) -> f64 {
        self.magnitude(base).value()
    }
}

/// Reaction type, determined by the number of products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReactionKind {
    Degradation,
    OneToOne,
    OneToTwo,
}

/// A single reaction with one reactant and up to two products.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub reactant: usize,
    pub products: Vec<usize>,
    pub rate: RateSpec,
}

impl Reaction {
    pub fn kind(&self) -> ReactionKind {
        match self.products.len() {
            0 => ReactionKind::Degradation,
            1 => ReactionKind::OneToOne,
            _ => ReactionKind::OneToTwo,
        }
    }
}

/// Species, reactions and the scale parameter `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    pub base: f64,
    pub species: Vec<String>,
    pub reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    /// Index of a species by identifier.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    /// Copy of the network with reaction `index` set to rate `b^scale`.
    pub fn with_reaction_scale(&self, index: usize, scale: i64) -> Result<ReactionNetwork> {
        if index >= self.reactions.len() {
            return Err(Error::Precondition(format!(
                "reaction index {index} out of range (network has {} reactions)",
                self.reactions.len()
            )));
        }
        let mut net = self.clone();
        net.reactions[index].rate = RateSpec::Scale(scale);
        Ok(net)
    }

    /// Writes the network in the line-oriented file grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "base {}", self.base).unwrap();
        writeln!(out, "species {}", self.species.join(" ")).unwrap();
        for r in &self.reactions {
            let rate = match r.rate {
                RateSpec::Value(v) => format!("rate {v:e}"),
                RateSpec::Scale(n) => format!("scale {n}"),
            };
            let reactant = &self.species[r.reactant];
            match r.kind() {
                ReactionKind::Degradation => writeln!(out, "degrade {reactant} {rate}").unwrap(),
                _ => {
                    let products: Vec<&str> = r.products.iter().map(|&p| self.species[p].as_str()).collect();
                    writeln!(out, "reaction {reactant} -> {} {rate}", products.join(" + ")).unwrap()
                }
            }
        }
        out
    }
}

/// Parses a network file.
///
/// Grammar: `base <real>` first, then `species <id>...`, `reaction <id> -> <id> [+ <id>]
/// (rate <float> | scale <int>)` and `degrade <id> (rate <float> | scale <int>)`.
/// `#` starts a comment.
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    let mut base: Option<f64> = None;
    let mut species: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut reactions = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |msg: &str| Error::Syntax { line, msg: msg.to_string() };
        if base.is_none() {
            if tokens[0] != "base" {
                return Err(syntax("the first directive must be `base <real>`"));
            }
            if tokens.len() != 2 {
                return Err(syntax("expected `base <real>`"));
            }
            let b: f64 = tokens[1].parse().map_err(|_| syntax("invalid base"))?;
            if !(b > 1.0 && b.is_finite()) {
                return Err(syntax("base must be a finite real > 1"));
            }
            base = Some(b);
            continue;
        }
        let lookup =
            |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownSpecies { line, name: name.to_string() });
        match tokens[0] {
            "base" => return Err(syntax("`base` may appear only once")),
            "species" => {
                if tokens.len() < 2 {
                    return Err(syntax("expected at least one species identifier"));
                }
                for &name in &tokens[1..] {
                    if index.contains_key(name) {
                        return Err(Error::DuplicateSpecies { line, name: name.to_string() });
                    }
                    if !is_identifier(name) {
                        return Err(syntax(&format!("invalid species identifier `{name}`")));
                    }
                    index.insert(name.to_string(), species.len());
                    species.push(name.to_string());
                }
            }
            "reaction" => {
                let arrow = tokens.iter().position(|&t| t == "->");
                let Some(arrow) = arrow else {
                    return Err(syntax("expected `->`"));
                };
                if arrow != 2 {
                    return Err(syntax("expected `reaction <id> -> ...`"));
                }
                let reactant = lookup(tokens[1])?;
                if tokens.len() < 6 {
                    return Err(syntax("expected products followed by `rate` or `scale`"));
                }
                let rate_at = tokens.len() - 2;
                let rate = parse_rate(tokens[rate_at], tokens[rate_at + 1], line)?;
                let product_tokens = &tokens[arrow + 1..rate_at];
                let mut products = Vec::new();
                for (j, &t) in product_tokens.iter().enumerate() {
                    if j % 2 == 1 {
                        if t != "+" {
                            return Err(syntax("products must be separated by `+`"));
                        }
                    } else {
                        products.push(lookup(t)?);
                    }
                }
                if product_tokens.len().is_multiple_of(2) {
                    return Err(syntax("dangling `+` in product list"));
                }
                if products.len() > 2 {
                    return Err(Error::TooManyProducts { line });
                }
                reactions.push(Reaction { reactant, products, rate });
            }
            "degrade" => {
                if tokens.len() != 4 {
                    return Err(syntax("expected `degrade <id> (rate <float> | scale <int>)`"));
                }
                let reactant = lookup(tokens[1])?;
                let rate = parse_rate(tokens[2], tokens[3], line)?;
                reactions.push(Reaction { reactant, products: Vec::new(), rate });
            }
            other => return Err(syntax(&format!("unknown directive `{other}`"))),
        }
    }
    let Some(base) = base else {
        return Err(Error::Syntax { line: 0, msg: "missing `base` directive".into() });
    };
    if species.is_empty() {
        return Err(Error::Syntax { line: 0, msg: "no species declared".into() });
    }
    Ok(ReactionNetwork { base, species, reactions })
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s != "->"
        && s != "+"
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

fn parse_rate(keyword: &str, value: &str, line: usize) -> Result<RateSpec> {
    match keyword {
        "rate" => {
            let v: f64 = value.parse().map_err(|_| Error::Syntax { line, msg: format!("invalid rate `{value}`") })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveRate { line });
            }
            Ok(RateSpec::Value(v))
        }
        "scale" => {
            let n: i64 =
                value.parse().map_err(|_| Error::Syntax { line, msg: format!("invalid integer scale `{value}`") })?;
            Ok(RateSpec::Scale(n))
        }
        _ => Err(Error::Syntax { line, msg: "expected `rate <float>` or `scale <int>`".into() }),
    }
}

/// Directed graph of split reactions with deficiency and degradation rates per vertex.
///
/// Also used for effective (renormalized) graphs, whose vertices may be compound.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitGraph {
    base: f64,
    names: Vec<String>,
    out: Vec<BTreeMap<usize, Mag>>,
    kappa: Vec<Mag>,
    beta: Vec<Mag>,
}

/// Flavor of a generator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Defective generator `A(alpha) = A - alpha Id`.
    Defective,
    /// Conservative Markov generator with diagonal `-k_v`.
    Conservative,
}

/// Flavor of a weight matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFlavor {
    /// `w(alpha)_{v->v'} = k_{v->v'} / (|A_vv| + alpha)`.
    Defective,
    /// `w~_{v->v'} = k_{v->v'} / k_v`.
    Markov,
}

/// Dense generator with exact column sums carried alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    /// Entry `(v', v)` is the rate `v -> v'`; column `v` holds the outflow of `v`.
    pub m: DMatrix<f64>,
    pub flavor: Flavor,
    pub alpha: f64,
    /// Column sums computed from rates rather than by summing entries.
    pub col_sums: DVector<f64>,
}

impl GeneratorMatrix {
    /// Wraps an arbitrary Metzler matrix, computing column sums numerically.
    pub fn from_dense(m: DMatrix<f64>) -> GeneratorMatrix {
        let col_sums = DVector::from_iterator(m.ncols(), m.column_iter().map(|c| c.sum()));
        GeneratorMatrix { m, flavor: Flavor::Defective, alpha: 0.0, col_sums }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Principal submatrix on `idx`; column sums lose the flux leaving the block.
    pub fn principal(&self, idx: &[usize]) -> GeneratorMatrix {
        let k = idx.len();
        let m = DMatrix::from_fn(k, k, |i, j| self.m[(idx[i], idx[j])]);
        let col_sums = DVector::from_iterator(
            k,
            idx.iter().map(|&c| {
                let leak: f64 = (0..self.dim()).filter(|r| !idx.contains(r)).map(|r| self.m[(r, c)]).sum();
                self.col_sums[c] - leak
            }),
        );
        GeneratorMatrix { m, flavor: self.flavor, alpha: self.alpha, col_sums }
    }

    /// Off-diagonal support as an adjacency list `v -> v'`.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        (0..n).map(|c| (0..n).filter(|&r| r != c && self.m[(r, c)] > 0.0).collect()).collect()
    }

    /// `|A_vv|`, taken as `-A_vv`.
    pub fn abs_diag(&self, v: usize) -> f64 {
        -self.m[(v, v)]
    }
}

/// Dense matrix of transition weights, rows indexed by the source vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub m: DMatrix<f64>,
    pub flavor: WeightFlavor,
    pub alpha: f64,
}

/// Integer scales of edges, vertices, deficiencies and degradations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleAssignment {
    pub edge: BTreeMap<(usize, usize), i64>,
    /// Maximum outgoing edge scale.
    pub vertex: Vec<Scale>,
    pub deficiency: Vec<Scale>,
    pub degradation: Vec<Scale>,
}

impl SplitGraph {
    /// Graph with the given vertex names and no edges.
    pub fn new(base: f64, names: Vec<String>) -> SplitGraph {
        let n = names.len();
        SplitGraph { base, names, out: vec![BTreeMap::new(); n], kappa: vec![Mag::ZERO; n], beta: vec![Mag::ZERO; n] }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// Adds `rate` to edge `from -> to`, aggregating with an existing edge.
    pub fn add_edge(&mut self, from: usize, to: usize, rate: Mag) {
        assert_ne!(from, to, "split graphs carry no self-edges");
        if rate.is_zero() {
            return;
        }
        let base = self.base;
        let e = self.out[from].entry(to).or_insert(Mag::ZERO);
        *e = e.plus(rate, base);
    }

    pub fn add_kappa(&mut self, v: usize, rate: Mag) {
        self.kappa[v] = self.kappa[v].plus(rate, self.base);
    }

    pub fn add_beta(&mut self, v: usize, rate: Mag) {
        self.beta[v] = self.beta[v].plus(rate, self.base);
    }

    /// Rate of `from -> to` (zero when absent).
    pub fn edge(&self, from: usize, to: usize) -> Mag {
        self.out[from].get(&to).copied().unwrap_or(Mag::ZERO)
    }

    /// Outgoing edges of `v` in target order.
    pub fn edges_from(&self, v: usize) -> impl Iterator<Item = (usize, Mag)> + '_ {
        self.out[v].iter().map(|(&t, &m)| (t, m))
    }

    /// All edges `(from, to, rate)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Mag)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, m)| m.iter().map(move |(&t, &r)| (s, t, r)))
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.len()).sum()
    }

    pub fn kappa(&self, v: usize) -> Mag {
        self.kappa[v]
    }

    pub fn beta(&self, v: usize) -> Mag {
        self.beta[v]
    }

    /// Total outgoing rate `k_v` (edges only).
    pub fn k_out(&self, v: usize) -> f64 {
        self.out[v].values().map(|m| m.value()).sum()
    }

    /// Total outgoing rate as a magnitude.
    pub fn k_out_mag(&self, v: usize) -> Mag {
        self.out[v].values().fold(Mag::ZERO, |acc, &m| acc.plus(m, self.base))
    }

    /// `|A_vv| = k_v + beta_v - kappa_v`.
    pub fn abs_diag(&self, v: usize) -> f64 {
        self.k_out(v) + self.beta[v].value() - self.kappa[v].value()
    }

    /// Successor lists.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        self.out.iter().map(|m| m.keys().copied().collect()).collect()
    }

    /// Generator `A(alpha)` or the conservative `A~`.
    pub fn generator(&self, alpha: f64, flavor: Flavor) -> GeneratorMatrix {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        let mut col_sums = DVector::zeros(n);
        for (s, t, r) in self.edges() {
            m[(t, s)] = r.value();
        }
        for v in 0..n {
            match flavor {
                Flavor::Defective => {
                    m[(v, v)] = -(self.abs_diag(v) + alpha);
                    col_sums[v] = self.kappa[v].value() - self.beta[v].value() - alpha;
                }
                Flavor::Conservative => {
                    m[(v, v)] = -self.k_out(v);
                    col_sums[v] = 0.0;
                }
            }
        }
        let alpha = if flavor == Flavor::Conservative { 0.0 } else { alpha };
        GeneratorMatrix { m, flavor, alpha, col_sums }
    }

    /// Weight matrix `w(alpha)` or `w~`.
    pub fn weights(&self, alpha: f64, flavor: WeightFlavor) -> Result<WeightMatrix> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for v in 0..n {
            let denom = match flavor {
                WeightFlavor::Defective => self.abs_diag(v) + alpha,
                WeightFlavor::Markov => self.k_out(v),
            };
            if self.out[v].is_empty() && flavor == WeightFlavor::Markov {
                continue;
            }
            if denom <= 0.0 {
                return Err(Error::SingularWeight { vertex: self.names[v].clone() });
            }
            for (t, r) in self.edges_from(v) {
                m[(v, t)] = r.value() / denom;
            }
        }
        let alpha = if flavor == WeightFlavor::Markov { 0.0 } else { alpha };
        Ok(WeightMatrix { m, flavor, alpha })
    }

    /// Deficiency weights `eps_v = kappa_v / (|A_vv| + alpha)`.
    pub fn deficiency_weights(&self, alpha: f64) -> Result<Vec<f64>> {
        (0..self.n())
            .map(|v| {
                let denom = self.abs_diag(v) + alpha;
                if self.kappa[v].is_zero() {
                    Ok(0.0)
                } else if denom <= 0.0 {
                    Err(Error::SingularWeight { vertex: self.names[v].clone() })
                } else {
                    Ok(self.kappa[v].value() / denom)
                }
            })
            .collect()
    }

    /// Integer scales of all rates.
    pub fn scales(&self) -> ScaleAssignment {
        let edge: BTreeMap<(usize, usize), i64> =
            self.edges().map(|(s, t, r)| ((s, t), r.scale().expect("stored edges are positive"))).collect();
        let vertex = (0..self.n()).map(|v| self.out[v].values().map(|m| m.scale()).max().flatten()).collect();
        ScaleAssignment {
            edge,
            vertex,
            deficiency: self.kappa.iter().map(|m| m.scale()).collect(),
            degradation: self.beta.iter().map(|m| m.scale()).collect(),
        }
    }

    /// Subgraph induced on `vertices` (in the given order); edges leaving the set are
    /// folded into degradation so that the generator is the principal submatrix.
    pub fn restrict(&self, vertices: &[usize]) -> SplitGraph {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let mut g = SplitGraph::new(self.base, names);
        for (i, &v) in vertices.iter().enumerate() {
            g.kappa[i] = self.kappa[v];
            g.beta[i] = self.beta[v];
            for (t, r) in self.edges_from(v) {
                match pos.get(&t) {
                    Some(&j) => g.add_edge(i, j, r),
                    None => g.add_beta(i, r),
                }
            }
        }
        g
    }
}

/// Builds the split graph of a network.
///
/// A reaction `v -> v' + v''` adds its rate to each product edge with `v' != v` and to
/// `kappa_v`; degradations accumulate into `beta_v`; one-to-one reactions add edge rates.
pub fn split(net: &ReactionNetwork) -> SplitGraph {
    let mut g = SplitGraph::new(net.base, net.species.clone());
    for r in &net.reactions {
        let k = r.rate.magnitude(net.base);
        match r.kind() {
            ReactionKind::Degradation => g.add_beta(r.reactant, k),
            ReactionKind::OneToOne => {
                if r.products[0] != r.reactant {
                    g.add_edge(r.reactant, r.products[0], k);
                }
            }
            ReactionKind::OneToTwo => {
                g.add_kappa(r.reactant, k);
                for &p in &r.products {
                    if p != r.reactant {
                        g.add_edge(r.reactant, p, k);
                    }
                }
            }
        }
    }
    g
}

/// Scale of a quantity, shorthand for `Mag::from_value(x, b).scale()`.
pub fn scale_of(x: f64, base: f64) -> Scale {
    if x <= 0.0 {
        None
    } else {
        floor_log(x.ln() / base.ln())
    }
}
