//! Human- and machine-readable renderings of an [`ExperimentReport`].
//!
//! Confusion cells are printed `mean(std)` with two decimals, rates with
//! four. A statistic that was undefined in any repeat prints as `N/A`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use screenml_core::classifiers::ClassifierKind;
use screenml_core::evaluation::{Aggregate, AlgorithmSummary, Comparison, MetricSummary};
use screenml_core::ExperimentReport;

pub const COUNT_DECIMALS: usize = 2;
pub const RATE_DECIMALS: usize = 4;

/// Formats `mean(std)` at a fixed number of decimals.
pub fn format_mean_std(mean: f64, std: f64, decimals: usize) -> String {
    format!("{mean:.decimals$}({std:.decimals$})")
}

/// Inverse of [`format_mean_std`]; `None` for `N/A` or malformed input.
pub fn parse_mean_std(s: &str) -> Option<(f64, f64)> {
    let (mean, rest) = s.trim().split_once('(')?;
    let std = rest.strip_suffix(')')?;
    Some((mean.parse().ok()?, std.parse().ok()?))
}

/// `mean(std)`, or `N/A` unless defined in every one of `repeats`.
pub fn render_aggregate(agg: &Aggregate, repeats: usize, decimals: usize) -> String {
    match agg.complete(repeats) {
        Some((m, s)) => format_mean_std(m, s, decimals),
        None => "N/A".to_string(),
    }
}

/// p-value cell: four decimals, or `p < 0.0001` below that.
pub fn render_p_value(p: f64) -> String {
    if p < 1e-4 {
        "p < 0.0001".to_string()
    } else {
        format!("p = {p:.4}")
    }
}

pub fn display_name(kind: ClassifierKind) -> &'static str {
    match kind {
        ClassifierKind::Nuclear => "Nuclear",
        ClassifierKind::Basic => "Basic",
        ClassifierKind::Bayes => "Bayes",
        ClassifierKind::Svm => "SVM",
    }
}

/// 2x2 cells `[[tn, fp], [fn, tp]]` (rows actual, columns predicted).
pub fn confusion_cells(summary: &AlgorithmSummary, repeats: usize) -> [[String; 2]; 2] {
    let c = &summary.confusion;
    let cell = |a: &Aggregate| render_aggregate(a, repeats, COUNT_DECIMALS);
    [[cell(&c.tn), cell(&c.fp)], [cell(&c.fn_), cell(&c.tp)]]
}

const SUMMARY_COLUMNS: [&str; 6] = [
    "Accuracy",
    "F1 score",
    "Precision",
    "Recall",
    "False omission rate",
    "Predicted negative",
];

fn summary_cells(m: &MetricSummary, repeats: usize) -> [String; 6] {
    [
        &m.accuracy,
        &m.f1,
        &m.precision,
        &m.recall,
        &m.false_omission_rate,
        &m.predicted_negative_fraction,
    ]
    .map(|a| render_aggregate(a, repeats, RATE_DECIMALS))
}

/// Square t-test matrix over the algorithms with F1 defined in every
/// repeat; `-` on the diagonal and wherever the test itself was undefined.
pub fn t_test_matrix(report: &ExperimentReport) -> Vec<Vec<String>> {
    let kinds = &report.t_tests.algorithms;
    kinds
        .iter()
        .map(|&a| {
            kinds
                .iter()
                .map(|&b| match report.t_tests.get(a, b) {
                    Some(Comparison::Tested(r)) => render_p_value(r.p_value),
                    _ => "-".to_string(),
                })
                .collect()
        })
        .collect()
}

pub fn render_markdown(report: &ExperimentReport) -> String {
    let repeats = report.config.repeats;
    let mut out = String::new();
    let c = &report.corpus;
    let s = &report.split;
    writeln!(out, "# Screening evaluation\n").unwrap();
    writeln!(
        out,
        "{} documents, {} labeled 1 ({:.2}%). {} repeats of a {}/{} train/test split, master seed {}.\n",
        c.documents,
        c.positives,
        100.0 * c.positive_rate,
        repeats,
        s.train_size,
        s.test_size,
        report.config.master_seed
    )
    .unwrap();

    writeln!(out, "## Label representation\n").unwrap();
    writeln!(out, "| Set | Documents | Share labeled 1 |").unwrap();
    writeln!(out, "|---|---|---|").unwrap();
    writeln!(out, "| Full | {} | {:.4} |", c.documents, c.positive_rate).unwrap();
    for (name, size, agg) in [
        ("Train", s.train_size, &s.train_positive_rate),
        ("Test", s.test_size, &s.test_positive_rate),
    ] {
        writeln!(
            out,
            "| {name} | {size} | {} |",
            render_aggregate(agg, repeats, RATE_DECIMALS)
        )
        .unwrap();
    }
    writeln!(out).unwrap();

    for a in &report.algorithms {
        let cells = confusion_cells(a, repeats);
        writeln!(
            out,
            "## Confusion matrix: {} (mean(std dev))\n",
            display_name(a.algorithm)
        )
        .unwrap();
        writeln!(out, "| Actual \\ Predicted | NOT | RCT |").unwrap();
        writeln!(out, "|---|---|---|").unwrap();
        writeln!(out, "| NOT | {} | {} |", cells[0][0], cells[0][1]).unwrap();
        writeln!(out, "| RCT | {} | {} |\n", cells[1][0], cells[1][1]).unwrap();
    }

    writeln!(out, "## Summary (mean(std dev))\n").unwrap();
    writeln!(out, "| Algorithm | {} |", SUMMARY_COLUMNS.join(" | ")).unwrap();
    writeln!(out, "|---{}|", "|---".repeat(SUMMARY_COLUMNS.len())).unwrap();
    for a in &report.algorithms {
        writeln!(
            out,
            "| {} | {} |",
            display_name(a.algorithm),
            summary_cells(&a.metrics, repeats).join(" | ")
        )
        .unwrap();
    }
    writeln!(out).unwrap();

    let kinds = &report.t_tests.algorithms;
    writeln!(out, "## Unpaired t-test of F1 scores\n").unwrap();
    if kinds.len() < 2 {
        writeln!(
            out,
            "Fewer than two algorithms have an F1 score in every repeat; no tests."
        )
        .unwrap();
    } else {
        let header: Vec<&str> = kinds.iter().map(|&k| display_name(k)).collect();
        writeln!(out, "| | {} |", header.join(" | ")).unwrap();
        writeln!(out, "|---{}|", "|---".repeat(kinds.len())).unwrap();
        for (row, &k) in t_test_matrix(report).iter().zip(kinds) {
            writeln!(out, "| {} | {} |", display_name(k), row.join(" | ")).unwrap();
        }
    }
    let excluded = &report.t_tests.excluded;
    if !excluded.is_empty() {
        let names: Vec<&str> = excluded.iter().map(|&k| display_name(k)).collect();
        writeln!(
            out,
            "\nNot tested (F1 undefined in some repeat): {}.",
            names.join(", ")
        )
        .unwrap();
    }
    out
}

fn csv_line(out: &mut String, fields: &[&str]) {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(fields).expect("in-memory csv");
    out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory csv")).expect("utf-8"));
}

/// Long-format CSV of every rendered cell: `table,row,column,value`.
pub fn render_csv(report: &ExperimentReport) -> String {
    let repeats = report.config.repeats;
    let mut out = String::new();
    csv_line(&mut out, &["table", "row", "column", "value"]);
    for a in &report.algorithms {
        let table = format!("confusion_{}", a.algorithm);
        let cells = confusion_cells(a, repeats);
        for (r, row) in ["NOT", "RCT"].iter().enumerate() {
            for (c, col) in ["NOT", "RCT"].iter().enumerate() {
                csv_line(&mut out, &[&table, row, col, &cells[r][c]]);
            }
        }
    }
    for a in &report.algorithms {
        for (col, cell) in SUMMARY_COLUMNS
            .iter()
            .zip(summary_cells(&a.metrics, repeats))
        {
            csv_line(
                &mut out,
                &["summary", display_name(a.algorithm), col, &cell],
            );
        }
    }
    let kinds = &report.t_tests.algorithms;
    for (row, &a) in t_test_matrix(report).iter().zip(kinds) {
        for (cell, &b) in row.iter().zip(kinds) {
            csv_line(
                &mut out,
                &["t_test", display_name(a), display_name(b), cell],
            );
        }
    }
    out
}

/// Rendered tables as JSON (strings exactly as in the markdown).
pub fn render_tables_json(report: &ExperimentReport) -> Value {
    let repeats = report.config.repeats;
    let confusion: serde_json::Map<String, Value> = report
        .algorithms
        .iter()
        .map(|a| {
            (
                a.algorithm.name().to_string(),
                json!(confusion_cells(a, repeats)),
            )
        })
        .collect();
    let summary: Vec<Value> = report
        .algorithms
        .iter()
        .map(|a| {
            let cells = summary_cells(&a.metrics, repeats);
            let mut row = serde_json::Map::new();
            row.insert("algorithm".into(), json!(a.algorithm.name()));
            for (col, cell) in SUMMARY_COLUMNS.iter().zip(cells) {
                row.insert(col.to_lowercase().replace(' ', "_"), json!(cell));
            }
            Value::Object(row)
        })
        .collect();
    json!({
        "confusion": confusion,
        "summary": summary,
        "t_tests": {
            "algorithms": report.t_tests.algorithms,
            "excluded": report.t_tests.excluded,
            "matrix": t_test_matrix(report),
        },
    })
}

/// Per-algorithm accuracy and F1 means with std error bars; empty cells
/// where the statistic is N/A.
pub fn plot_data_csv(report: &ExperimentReport) -> String {
    let repeats = report.config.repeats;
    let mut out = String::new();
    csv_line(
        &mut out,
        &[
            "algorithm",
            "accuracy_mean",
            "accuracy_std",
            "f1_mean",
            "f1_std",
        ],
    );
    let pair = |a: &Aggregate| match a.complete(repeats) {
        Some((m, s)) => [format!("{m}"), format!("{s}")],
        None => [String::new(), String::new()],
    };
    for a in &report.algorithms {
        let [am, asd] = pair(&a.metrics.accuracy);
        let [fm, fsd] = pair(&a.metrics.f1);
        csv_line(&mut out, &[a.algorithm.name(), &am, &asd, &fm, &fsd]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_format() {
        assert_eq!(format_mean_std(296.85, 8.07, 2), "296.85(8.07)");
        assert_eq!(format_mean_std(0.906_8, 0.013_2, 4), "0.9068(0.0132)");
        assert_eq!(format_mean_std(0.0, 0.0, 2), "0.00(0.00)");
        assert_eq!(parse_mean_std("296.85(8.07)"), Some((296.85, 8.07)));
        assert_eq!(parse_mean_std("N/A"), None);
        assert_eq!(parse_mean_std("1.0(2.0"), None);
    }

    #[test]
    fn undefined_aggregates_render_na() {
        assert_eq!(render_aggregate(&Aggregate::UNDEFINED, 3, 4), "N/A");
        let partial = Aggregate {
            mean: Some(0.5),
            std: Some(0.1),
            n_defined: 2,
        };
        assert_eq!(render_aggregate(&partial, 3, 4), "N/A");
        assert_eq!(render_aggregate(&partial, 2, 4), "0.5000(0.1000)");
    }

    #[test]
    fn p_values() {
        assert_eq!(render_p_value(3e-50), "p < 0.0001");
        assert_eq!(render_p_value(0.0123), "p = 0.0123");
        assert_eq!(render_p_value(1.0), "p = 1.0000");
    }

    #[test]
    fn csv_quotes_fields() {
        let mut s = String::new();
        csv_line(&mut s, &["a", "b,c", "d"]);
        assert_eq!(s, "a,\"b,c\",d\n");
    }
}
