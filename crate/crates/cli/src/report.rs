//! Plain-text reports and CSV output with fixed formatting.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use crn_lyapunov::hierarchy::{Comparison, LambdaEstimate};
use crn_lyapunov::mag::fmt_scale;
use crn_lyapunov::network::{ReactionNetwork, SplitGraph, WeightFlavor};
use crn_lyapunov::oracle::{apriori_bounds_internal, green_kernel, AprioriBounds, SourceOracle};
use crn_lyapunov::sweep::{Analysis, SweepRow, SweepSpec};

fn join(items: impl IntoIterator<Item = String>) -> String {
    let v: Vec<String> = items.into_iter().collect();
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(" ")
    }
}

fn log_b(x: f64, base: f64) -> String {
    if x > 0.0 {
        format!("{:.3}", x.ln() / base.ln())
    } else {
        "-".to_string()
    }
}

/// Coalescence tree, cores and hierarchical estimates.
pub fn analysis(net: &ReactionNetwork, a: &Analysis) -> String {
    let mut s = String::new();
    let (tree, e) = (&a.tree, &a.estimate);
    let g = &tree.graph;
    let o = &tree.options;
    let _ = writeln!(s, "options mode={:?} tol={} resonance_branch={:?}", o.mode, o.tol, o.resonance_branch);
    s.push_str("[tree]\n");
    s.push_str(&tree.dump());
    s.push_str("[cores]\n");
    let cores = &e.cores;
    let _ = writeln!(s, "source {}", net.species[e.sigma0]);
    let _ = writeln!(s, "accessible {}", join(cores.accessible.iter().map(|&v| net.species[v].clone())));
    for (i, scc) in cores.sccs.iter().enumerate() {
        let _ = writeln!(
            s,
            "scc {} members={} alpha={}{}",
            g.name(scc.vertex),
            scc.species.iter().map(|&v| net.species[v].as_str()).collect::<Vec<_>>().join(","),
            fmt_scale(scc.alpha),
            if cores.cores.contains(&i) { " core" } else { "" },
        );
    }
    let _ = writeln!(s, "threshold {}", fmt_scale(cores.threshold));
    s.push_str("[estimate]\n");
    match e.lambda {
        LambdaEstimate::Growth(n) => {
            let _ = writeln!(s, "lambda b^{n}");
        }
        LambdaEstimate::NonPositive => s.push_str("lambda non-autocatalytic; stationary-measure scales reported\n"),
    }
    s.push_str("species pi_log vdagger_log v_log\n");
    for (v, name) in net.species.iter().enumerate() {
        let _ =
            writeln!(s, "{name} {} {} {}", fmt_scale(e.pi_log[v]), fmt_scale(e.vdagger_log[v]), fmt_scale(e.v_log[v]));
    }
    let f = e.flags;
    let _ = writeln!(
        s,
        "flags resonance={} resonant_cores={} cemetery={} shadow_zone={}",
        f.resonance, f.resonant_cores, f.cemetery, f.shadow_zone
    );
    if f.any_resonance() {
        s.push_str("note resonance: scales tie within the tolerance, estimates depend on the resonance branch\n");
    }
    s
}

fn bounds_section(s: &mut String, b: &AprioriBounds, lambda: f64, g: &SplitGraph, block: &[usize]) {
    let _ = writeln!(s, "block {}", join(block.iter().map(|&v| g.name(v).to_string())));
    let _ = writeln!(s, "m {:.6e} M {:.6e} d {:.6e} D {:.6e}", b.m, b.big_m, b.d, b.big_d);
    s.push_str("sigma lower upper x_lower y2_lower x_upper y2_upper\n");
    for p in &b.per_sigma {
        let _ = writeln!(
            s,
            "{} {:.6e} {} {:.6e} {:.6e} {:.6e} {:.6e}",
            g.name(block[p.sigma]),
            p.lower,
            p.upper.map_or("-".to_string(), |u| format!("{u:.6e}")),
            p.x_lower,
            p.y2_lower,
            p.x_upper,
            p.y2_upper,
        );
    }
    let upper = b.upper.map_or("not-informative".to_string(), |u| format!("{u:.6e}"));
    let _ = writeln!(s, "lower {:.6e} upper {upper}", b.lower);
    let holds = b.lower <= lambda && b.upper.is_none_or(|u| lambda <= u);
    let _ = writeln!(s, "sandwich {}", if holds { "holds" } else { "violated" });
}

/// Perron data, a-priori bounds on the dominant block and an optional Green kernel.
pub fn oracle(g: &SplitGraph, o: &SourceOracle, sigma0: usize, green: Option<usize>) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "source {}", g.name(sigma0));
    let r = &o.result;
    let base = g.base();
    let _ = writeln!(s, "vertices {}", join(o.vertices.iter().map(|&v| g.name(v).to_string())));
    let _ = writeln!(s, "lambda* {:.6e}", r.lambda_star);
    let _ = writeln!(s, "log_b lambda* {}", log_b(r.lambda_star, base));
    let _ = writeln!(s, "squarings {} residual {:.3e}", r.iterations, r.residual);
    s.push_str("species v* vdagger* pi* log_b_pi*\n");
    for (i, &v) in o.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "{} {:.6e} {:.6e} {:.6e} {}",
            g.name(v),
            r.v_star[i],
            r.v_dagger_star[i],
            r.pi_star[i],
            log_b(r.pi_star[i], base)
        );
    }
    s.push_str("[apriori]\n");
    match apriori_bounds_internal(g, &o.dominant_block) {
        Ok(b) => bounds_section(&mut s, &b, r.lambda_star, g, &o.dominant_block),
        Err(e) => {
            let _ = writeln!(s, "unavailable: {e}");
        }
    }
    if let Some(n) = green {
        s.push_str("[green]\n");
        let sub = g.restrict(&o.vertices);
        let table = sub
            .weights(r.lambda_star, WeightFlavor::Defective)
            .and_then(|w| green_kernel(&w, o.position(sigma0).expect("source is accessible"), &[n]));
        match table {
            Ok(t) => {
                let row = t.last();
                let _ = writeln!(s, "horizon {}", row.horizon);
                let factor = 2f64.powi(row.log2_scale);
                s.push_str("species G_N/N\n");
                for (i, &v) in o.vertices.iter().enumerate() {
                    let _ = writeln!(s, "{} {:.6e}", g.name(v), row.normalized[i] * factor);
                }
            }
            Err(e) => {
                let _ = writeln!(s, "unavailable: {e}");
            }
        }
    }
    Ok(s)
}

/// Deviation table between hierarchical estimates and the oracle.
pub fn comparison(a: &Analysis, c: &Comparison, max_dev: f64) -> String {
    let mut s = String::new();
    let fmt = |x: Option<f64>| x.map_or("-inf".to_string(), |v| format!("{:.3}", (v * 1e3).round() / 1e3 + 0.0));
    s.push_str("quantity hier oracle deviation\n");
    for row in &c.rows {
        let _ = writeln!(s, "{} {} {} {:.3}", row.quantity, fmt(row.hier), fmt(row.oracle), row.deviation);
    }
    let _ = writeln!(s, "max_deviation {:.3} threshold {max_dev:.3}", c.max_deviation);
    let _ = writeln!(s, "result {}", if c.max_deviation <= max_dev { "pass" } else { "fail" });
    if a.estimate.flags.any_resonance() {
        s.push_str("note resonance: deviations near regime walls are expected\n");
    }
    s
}

/// CSV with `param_scale`, the requested quantities and a final `resonance` column.
pub fn write_csv<W: Write>(w: W, spec: &SweepSpec, rows: &[SweepRow]) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let mut header = vec!["param_scale".to_string()];
    header.extend(spec.quantities.iter().map(|q| q.to_string()));
    header.push("resonance".to_string());
    csv.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.param.to_string()];
        record.extend(row.cells.iter().map(|c| c.to_string()));
        record.push(u8::from(row.resonance).to_string());
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}
