//! Human-readable tables for statistics and scores. Machine-readable
//! reports are the serde forms of the same structures.

use std::fmt::Write;

use gecsynth_core::dataset::{CorpusStats, DatasetStats};
use gecsynth_core::eval::{GecReport, GedReport, Metrics};

fn corpus_row(out: &mut String, label: &str, stats: &CorpusStats) {
    let _ = writeln!(
        out,
        "{label:<20} {:>10} {:>12} {:>12} {:>9.2}%",
        stats.sentence_count,
        stats.token_count,
        stats.erroneous_token_count,
        100.0 * stats.error_rate
    );
}

pub fn stats_table(stats: &DatasetStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<20} {:>10} {:>12} {:>12} {:>10}", "corpus", "sentences", "tokens", "erroneous", "rate");
    for (label, corpus) in &stats.per_corpus {
        corpus_row(&mut out, label, corpus);
    }
    corpus_row(&mut out, "total", &stats.total);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<12} {:>10} {:>8}", "error", "tokens", "share");
    for (error, count) in &stats.total.type_counts {
        let share = stats.total.type_shares[error];
        let _ = writeln!(out, "{:<12} {:>10} {:>7.2}%", error.code(), count, 100.0 * share);
    }
    out
}

fn metrics_cells(m: &Metrics) -> String {
    format!("{:>9.4} {:>9.4} {:>9.4}", m.precision, m.recall, m.f_half)
}

pub fn ged_table(report: &GedReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<12} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9}", "tag", "tp", "fp", "fn", "P", "R", "F0.5");
    let rows = report.per_tag.iter().map(|(e, s)| (e.code(), s)).chain([("all", &report.aggregate)]);
    for (label, score) in rows {
        let c = score.counts;
        let _ = writeln!(out, "{label:<12} {:>6} {:>6} {:>6} {}", c.tp, c.fp, c.fn_, metrics_cells(&score.metrics));
    }
    let _ = writeln!(out, "decoding: top_p={} beam={}", report.decoding.top_p, report.decoding.beam_size);
    out
}

pub fn gec_table(report: &GecReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>8} {:>9} {:>6} {:>9} {:>9} {:>9}", "matched", "predicted", "gold", "P", "R", "F0.5");
    let _ = writeln!(
        out,
        "{:>8} {:>9} {:>6} {}",
        report.matched,
        report.predicted,
        report.gold,
        metrics_cells(&report.metrics)
    );
    let _ = writeln!(out, "decoding: top_p={} beam={}", report.decoding.top_p, report.decoding.beam_size);
    out
}
