//! Serialized forms of analysis and probe results.
//!
//! JSON layout of an analysis report (top-level keys):
//! `name`, `seed`, `group`, `group_order`, `dim_v`, `dim_w`,
//! `reductions` (trivial summands stripped, kernel and quotient orders),
//! `lattice` (`nodes` sorted by decreasing order, `edges` as `[upper, lower]`
//! node indices), `components` (one per nontrivial isotypic component of `W`,
//! each with per-subgroup `verdicts` and an `evidence` object tagged by
//! `kind`), `verdicts` (aggregated over components), `vanishing`,
//! `main_theorem`, `notes`.

use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{AnalysisReport, Evidence, Mechanism, Verdict};
use crate::error::{Error, Result};
use crate::probe::{Comparison, MatchStatus};

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Included => "included",
        Verdict::NotIncluded => "not included",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn mechanism_str(m: Mechanism) -> &'static str {
    match m {
        Mechanism::TheoremIft => "implicit function theorem",
        Mechanism::BmsRegularity => "regularity of lowest-degree form",
        Mechanism::LsReduction => "Lyapunov-Schmidt reduction",
        Mechanism::Vanishing => "vanishing",
        Mechanism::IndexFilter => "index filter",
        Mechanism::FixTargetTrivial => "trivial fixed target",
    }
}

fn evidence_str(e: &Evidence) -> String {
    match e {
        Evidence::None => "-".into(),
        Evidence::Index => "s <= 0".into(),
        Evidence::LinearRank { generic_rank, target_rank, draws, .. } => {
            format!("generic rank {generic_rank}/{target_rank} over {draws} draws")
        }
        Evidence::Regularity { degree, success_fraction, samples, samples_with_roots, .. } => format!(
            "degree {degree}, success {:.2} ({} of {} draws with roots)",
            success_fraction,
            samples_with_roots,
            samples.len()
        ),
        Evidence::Reduction { matched_copies, reduced_dim_v, reduced_dim_w, reduced, .. } => format!(
            "{matched_copies} copies eliminated, reduced {reduced_dim_v} -> {reduced_dim_w}: {}",
            evidence_str(&reduced.evidence)
        ),
        Evidence::Vanishing { kernel_v, kernel_w } => format!("|ker V| = {kernel_v}, |ker W| = {kernel_w}"),
    }
}

pub fn to_markdown(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", r.name);
    let _ = writeln!(s, "- group: {} (order {})", r.group, r.group_order);
    let _ = writeln!(s, "- dim V = {}, dim W = {}", r.dim_v, r.dim_w);
    let _ = writeln!(s, "- seed: {}", r.seed);
    let red = &r.reductions;
    let _ = writeln!(
        s,
        "- trivial summands removed: {} from V, {} from W; kernel order {}, effective order {}",
        red.trivial_v, red.trivial_w, red.kernel_order, red.quotient_order
    );
    if r.vanishing {
        let _ = writeln!(s, "- every equivariant vanishes identically");
    }
    if let Some(m) = &r.main_theorem {
        let _ = writeln!(s, "- {m}");
    }

    s.push_str("\n## Isotropy lattice\n\n| subgroup | order | dim Fix V | dim Fix W | s | maximal |\n|---|---|---|---|---|---|\n");
    for n in &r.lattice.nodes {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            n.name,
            n.order,
            n.dim_fix_v,
            n.dim_fix_w,
            n.index,
            if n.is_maximal { "yes" } else { "" }
        );
    }

    s.push_str("\n## Components\n\n");
    for (i, c) in r.components.iter().enumerate() {
        let _ = writeln!(
            s,
            "### W{} (irreducible dim {}, multiplicity {}, endomorphism dim {})\n",
            i + 1,
            c.irr_dim,
            c.multiplicity,
            c.endo_dim
        );
        if let Some(note) = &c.note {
            let _ = writeln!(s, "{note}\n");
        }
        if c.verdicts.is_empty() {
            continue;
        }
        s.push_str("| subgroup | s | verdict | mechanism | evidence |\n|---|---|---|---|---|\n");
        for v in &c.verdicts {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                v.sigma,
                v.index,
                verdict_str(v.verdict),
                mechanism_str(v.mechanism),
                evidence_str(&v.evidence)
            );
        }
        s.push('\n');
    }

    s.push_str("## Verdicts\n\n| subgroup | s | verdict | mechanisms | branch dim |\n|---|---|---|---|---|\n");
    for g in &r.verdicts {
        let mechs: Vec<&str> = g.mechanisms.iter().map(|m| mechanism_str(*m)).collect();
        let dim = g.predicted_branch_dim.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "| {} | {} | {} | {} | {} |", g.sigma, g.index, verdict_str(g.verdict), mechs.join(", "), dim);
    }
    if !r.notes.is_empty() {
        s.push_str("\n## Notes\n\n");
        for n in &r.notes {
            let _ = writeln!(s, "- {n}");
        }
    }
    s
}

pub fn comparisons_to_table(rows: &[Comparison]) -> String {
    let mut s = format!("{:<16} {:>9} {:>9}  status\n", "subgroup", "predicted", "estimated");
    for c in rows {
        let est = c.estimated.map(|d| d.to_string()).unwrap_or_else(|| "none".into());
        let status = match c.status {
            MatchStatus::Match => "match",
            MatchStatus::Mismatch => "MISMATCH",
            MatchStatus::NoZeros => "no zeros",
        };
        let flag = if c.non_generic_suspect { format!("  (non-generic suspect, |t| = {:.3})", c.t_norm) } else { String::new() };
        let _ = writeln!(s, "{:<16} {:>9} {:>9}  {status}{flag}", c.sigma, c.predicted, est);
    }
    s
}
