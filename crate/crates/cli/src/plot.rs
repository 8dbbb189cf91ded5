//! gnuplot scripts that only reference CSV columns.

use std::fmt::Write as _;

fn preamble(title: &str, logscale: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator \",\"");
    let _ = writeln!(s, "set title \"{title}\"");
    if !logscale.is_empty() {
        let _ = writeln!(s, "set logscale {logscale}");
    }
    s
}

/// One line per `(label, nu)` pair of a decay CSV.
pub fn decay(csv: &str, series: &[(String, String)]) -> String {
    let mut s = preamble(csv, "xy");
    let _ = writeln!(s, "set xlabel \"t\"\nset ylabel \"survival\"");
    let lines: Vec<String> = series
        .iter()
        .map(|(label, nu)| {
            format!(
                "\"{csv}\" using 1:((strcol(3) eq \"{label}\" && strcol(5) eq \"{nu}\") ? $2 : NaN) with lines title \"{label} nu={nu}\""
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    s
}

/// Rates against mode index, one file per series.
pub fn spectrum(files: &[(String, String)]) -> String {
    let mut s = preamble("decay rates", "xy");
    let _ = writeln!(s, "set xlabel \"l\"\nset ylabel \"gamma_l\"");
    let lines: Vec<String> = files
        .iter()
        .map(|(file, title)| format!("\"{file}\" using 1:3 with points title \"{title}\""))
        .collect();
    let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    s
}

pub fn perturb(csv: &str) -> String {
    let mut s = preamble(csv, "");
    let _ = writeln!(s, "set xlabel \"l\"\nset ylabel \"overlap correction\"");
    let _ = writeln!(
        s,
        "plot \"{csv}\" using 1:5 with points title \"exact\", \\\n     \"{csv}\" using 1:6 with lines title \"full first order\", \\\n     \"{csv}\" using 1:7 with lines title \"next-nearest neighbour\""
    );
    s
}
