//! Minimal line chart of m̂ against T, one polyline per learner.

use std::collections::BTreeMap;
use std::fmt::Write;

use arlab::harness::SweepRow;

const W: f64 = 480.0;
const H: f64 = 320.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn chart(rows: &[SweepRow]) -> String {
    let mut series: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for r in rows {
        series.entry(r.learner).or_default().push((r.t, r.m_hat));
    }
    let t_max = rows.iter().map(|r| r.t).max().unwrap_or(1).max(1) as f64;
    let m_max = rows.iter().map(|r| r.m_hat).max().unwrap_or(1).max(1) as f64;
    let x = |t: usize| PAD + (W - 2.0 * PAD) * t as f64 / t_max;
    let y = |m: usize| H - PAD - (H - 2.0 * PAD) * m as f64 / m_max;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD},{PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">T</text>"#, W - PAD + 6.0, H - PAD);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="12">m̂ ≤ {m_max}</text>"#, PAD - 8.0);
    for (i, (name, mut pts)) in series.into_iter().enumerate() {
        pts.sort_unstable();
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(t, m)| format!("{:.1},{:.1}", x(t), y(m))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{name}</text>"#,
            PAD + 8.0,
            PAD + 14.0 * (i as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    s
}
