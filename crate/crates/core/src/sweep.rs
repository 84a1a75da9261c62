//! Parameter sweeps over the scale of one reaction.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::hierarchy::{hier_estimates, HierEstimate};
use crate::network::{split, ReactionNetwork};
use crate::oracle::{perron_source, PerronOptions, SourceOracle};
use crate::renorm::{renormalize, CoalescenceTree, RenormOptions};

/// A swept output column, reported as `-log_b` of the quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    LambdaHier,
    LambdaOracle,
    /// Growth scale of the final cluster containing a species.
    ClusterLambda(String),
    PiLog(String),
    PiOracleLog(String),
    VdaggerLog(String),
    VdaggerOracleLog(String),
    /// Oracle ratio `pi*_a / pi*_b`.
    Ratio(String, String),
    /// Hierarchical ratio `pi_a / pi_b`.
    RatioHier(String, String),
}

impl Quantity {
    fn needs_oracle(&self) -> bool {
        matches!(
            self,
            Quantity::LambdaOracle | Quantity::PiOracleLog(_) | Quantity::VdaggerOracleLog(_) | Quantity::Ratio(..)
        )
    }

    /// Whether the column holds hierarchical (integer) values.
    pub fn is_hier(&self) -> bool {
        !self.needs_oracle()
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Quantity> {
        let bad = || Error::Precondition(format!("unknown quantity `{s}`"));
        let pair = |arg: &str| -> Result<(String, String)> {
            let (a, b) = arg.split_once('/').ok_or_else(bad)?;
            Ok((a.to_string(), b.to_string()))
        };
        let q = match s.split_once(':') {
            None => match s {
                "lambda_hier" => Quantity::LambdaHier,
                "lambda_oracle" => Quantity::LambdaOracle,
                _ => return Err(bad()),
            },
            Some((head, arg)) => {
                if arg.is_empty() {
                    return Err(bad());
                }
                match head {
                    "cluster_lambda" => Quantity::ClusterLambda(arg.into()),
                    "pi_log" => Quantity::PiLog(arg.into()),
                    "pi_oracle_log" => Quantity::PiOracleLog(arg.into()),
                    "vdagger_log" => Quantity::VdaggerLog(arg.into()),
                    "vdagger_oracle_log" => Quantity::VdaggerOracleLog(arg.into()),
                    "ratio" => {
                        let (a, b) = pair(arg)?;
                        Quantity::Ratio(a, b)
                    }
                    "ratio_hier" => {
                        let (a, b) = pair(arg)?;
                        Quantity::RatioHier(a, b)
                    }
                    _ => return Err(bad()),
                }
            }
        };
        Ok(q)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::LambdaHier => f.write_str("lambda_hier"),
            Quantity::LambdaOracle => f.write_str("lambda_oracle"),
            Quantity::ClusterLambda(s) => write!(f, "cluster_lambda:{s}"),
            Quantity::PiLog(s) => write!(f, "pi_log:{s}"),
            Quantity::PiOracleLog(s) => write!(f, "pi_oracle_log:{s}"),
            Quantity::VdaggerLog(s) => write!(f, "vdagger_log:{s}"),
            Quantity::VdaggerOracleLog(s) => write!(f, "vdagger_oracle_log:{s}"),
            Quantity::Ratio(a, b) => write!(f, "ratio:{a}/{b}"),
            Quantity::RatioHier(a, b) => write!(f, "ratio_hier:{a}/{b}"),
        }
    }
}

/// Sweep over `b^n` for the rate of reaction `reaction` (file order, 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub reaction: usize,
    pub from: i64,
    pub to: i64,
    pub step: i64,
    pub sigma0: usize,
    pub quantities: Vec<Quantity>,
    pub options: RenormOptions,
}

impl SweepSpec {
    /// Swept scales in increasing order.
    pub fn points(&self) -> Result<Vec<i64>> {
        if self.from > self.to || self.step < 1 {
            return Err(Error::Precondition("sweep needs from <= to and step >= 1".into()));
        }
        Ok((self.from..=self.to).step_by(self.step as usize).collect())
    }
}

/// A swept value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Hierarchical `-log_b` value.
    Int(i64),
    /// Oracle `-log_b` value.
    Real(f64),
    /// `-log_b 0`.
    Infinite,
    /// `-log_b` of a non-positive quantity.
    Undefined,
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Cell::Int(n) => Some(n as f64),
            Cell::Real(x) => Some(x),
            Cell::Infinite => Some(f64::INFINITY),
            Cell::Undefined => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Real(x) => write!(f, "{:.3}", (x * 1e3).round() / 1e3 + 0.0),
            Cell::Infinite => f.write_str("inf"),
            Cell::Undefined => f.write_str("nan"),
        }
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: i64,
    pub cells: Vec<Cell>,
    pub resonance: bool,
}

/// Analysis of one network for one source.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub tree: CoalescenceTree,
    pub estimate: HierEstimate,
    pub oracle: Option<SourceOracle>,
}

/// Renormalizes, evaluates the hierarchical formulas and optionally runs the oracle.
pub fn analyze(net: &ReactionNetwork, sigma0: usize, options: RenormOptions, with_oracle: bool) -> Result<Analysis> {
    let g = split(net);
    let tree = renormalize(&g, options)?;
    let estimate = hier_estimates(&tree, sigma0)?;
    let oracle = if with_oracle { Some(perron_source(&g, sigma0, PerronOptions::default())?) } else { None };
    Ok(Analysis { tree, estimate, oracle })
}

fn species(net: &ReactionNetwork, name: &str) -> Result<usize> {
    net.index_of(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
}

fn neg_log(x: f64, base: f64) -> Cell {
    if x > 0.0 {
        Cell::Real(-x.ln() / base.ln())
    } else if x == 0.0 {
        Cell::Infinite
    } else {
        Cell::Undefined
    }
}

fn neg_scale(s: Option<i64>) -> Cell {
    s.map_or(Cell::Infinite, |n| Cell::Int(-n))
}

fn cell(q: &Quantity, net: &ReactionNetwork, a: &Analysis) -> Result<Cell> {
    let base = net.base;
    let oracle_at = |name: &str, pick: fn(&SourceOracle) -> &Vec<f64>| -> Result<Cell> {
        let o = a.oracle.as_ref().expect("oracle requested");
        let s = species(net, name)?;
        Ok(o.position(s).map_or(Cell::Infinite, |i| neg_log(pick(o)[i], base)))
    };
    let e = &a.estimate;
    Ok(match q {
        Quantity::LambdaHier => match e.lambda.scale() {
            Some(n) => Cell::Int(-n),
            None => Cell::Undefined,
        },
        Quantity::LambdaOracle => neg_log(a.oracle.as_ref().expect("oracle requested").result.lambda_star, base),
        Quantity::ClusterLambda(name) => {
            let s = species(net, name)?;
            neg_scale(a.tree.vertex_lambda(a.tree.top_vertex(s)))
        }
        Quantity::PiLog(name) => neg_scale(e.pi_log[species(net, name)?]),
        Quantity::VdaggerLog(name) => neg_scale(e.vdagger_log[species(net, name)?]),
        Quantity::PiOracleLog(name) => oracle_at(name, |o| &o.result.pi_star)?,
        Quantity::VdaggerOracleLog(name) => oracle_at(name, |o| &o.result.v_dagger_star)?,
        Quantity::Ratio(x, y) => match (oracle_at(x, |o| &o.result.pi_star)?, oracle_at(y, |o| &o.result.pi_star)?) {
            (Cell::Real(p), Cell::Real(q)) => Cell::Real(p - q),
            _ => Cell::Undefined,
        },
        Quantity::RatioHier(x, y) => match (e.pi_log[species(net, x)?], e.pi_log[species(net, y)?]) {
            (Some(p), Some(q)) => Cell::Int(q - p),
            _ => Cell::Undefined,
        },
    })
}

/// Runs a sweep; points are evaluated with `exec` and returned in parameter order.
pub fn sweep(net: &ReactionNetwork, spec: &SweepSpec, exec: Exec) -> Result<Vec<SweepRow>> {
    let points = spec.points()?;
    if spec.reaction >= net.reactions.len() {
        return Err(Error::Precondition(format!(
            "reaction index {} out of range (network has {} reactions)",
            spec.reaction,
            net.reactions.len()
        )));
    }
    for q in &spec.quantities {
        if let Quantity::ClusterLambda(s)
        | Quantity::PiLog(s)
        | Quantity::PiOracleLog(s)
        | Quantity::VdaggerLog(s)
        | Quantity::VdaggerOracleLog(s) = q
        {
            species(net, s)?;
        }
        if let Quantity::Ratio(x, y) | Quantity::RatioHier(x, y) = q {
            species(net, x)?;
            species(net, y)?;
        }
    }
    let with_oracle = spec.quantities.iter().any(Quantity::needs_oracle);
    let rows = exec::map(exec, &points, |&n| -> Result<SweepRow> {
        let point = net.with_reaction_scale(spec.reaction, n)?;
        let a = analyze(&point, spec.sigma0, spec.options, with_oracle)?;
        let cells = spec.quantities.iter().map(|q| cell(q, &point, &a)).collect::<Result<Vec<_>>>()?;
        Ok(SweepRow { param: n, cells, resonance: a.estimate.flags.any_resonance() })
    });
    rows.into_iter().collect()
}
