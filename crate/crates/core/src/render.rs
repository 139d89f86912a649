//! Text output for patterns: exact CSV and plain SVG.
//!
//! SVG is the only place where coordinates are turned into decimals.

use std::fmt::Write;

use num_rational::BigRational;

use crate::cps::PointPattern;
use crate::qfield::Qf;

/// Digits after the decimal point in SVG coordinates.
pub const SVG_DIGITS: u32 = 15;

/// Header `m1,...,mr,x1,...,xd`.
pub fn csv_header(r: usize, d: usize) -> String {
    let cols: Vec<String> = (1..=r)
        .map(|i| format!("m{i}"))
        .chain((1..=d).map(|i| format!("x{i}")))
        .collect();
    cols.join(",")
}

/// One row per point in label order; scalars in exact textual form.
pub fn pattern_csv(pattern: &PointPattern, r: usize, d: usize) -> String {
    let mut out = csv_header(r, d);
    out.push('\n');
    for p in &pattern.points {
        let row: Vec<String> =
            p.m.iter()
                .map(|x| x.to_string())
                .chain(p.pos.iter().map(|x| x.to_string()))
                .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn dec(x: &Qf) -> String {
    x.to_decimal(SVG_DIGITS)
}

/// Points as circles in the square `[-radius, radius]²` around `center`,
/// with the physical y axis pointing up. One-dimensional patterns sit on the
/// horizontal axis.
pub fn pattern_svg(pattern: &PointPattern, center: &[Qf], radius: &BigRational) -> String {
    let r = Qf::rational(radius.clone());
    let side = &r + &r;
    let dot_r = Qf::rational(radius / BigRational::from_integer(60.into()));
    let origin = |k: usize| center.get(k).cloned().unwrap_or_else(Qf::zero);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"600\">",
        dec(&(&origin(0) - &r)),
        dec(&(-&(&origin(1) + &r))),
        dec(&side),
        dec(&side)
    );
    let _ = writeln!(out, "<g fill=\"black\" stroke=\"none\">");
    for p in &pattern.points {
        let x = p.pos.first().cloned().unwrap_or_else(Qf::zero);
        let y = p.pos.get(1).cloned().unwrap_or_else(Qf::zero);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            dec(&x),
            dec(&-&y),
            dec(&dot_r)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_vector;
    use crate::cps::{generate_pattern, Boundary, Point, Region};
    use crate::presets;

    #[test]
    fn header_lists_labels_then_coordinates() {
        assert_eq!(csv_header(4, 2), "m1,m2,m3,m4,x1,x2");
        assert_eq!(pattern_csv(&PointPattern::default(), 2, 1), "m1,m2,x1\n");
    }

    #[test]
    fn csv_rows_are_exact_and_parse_back() {
        let p = presets::octagon();
        let pat = generate_pattern(
            &p.scheme,
            &p.window,
            &p.shift,
            &Region::centered(2, 3),
            Boundary::Closed,
        );
        let csv = pattern_csv(&pat, 4, 2);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), pat.len() + 1);
        for (line, pt) in lines[1..].iter().zip(&pat.points) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 6);
            let m: Vec<i64> = cells[..4].iter().map(|c| c.parse().unwrap()).collect();
            assert_eq!(m, pt.m);
            let texts: Vec<String> = cells[4..].iter().map(|c| c.to_string()).collect();
            let x = parse_vector(&texts, 2).unwrap();
            assert_eq!(x, pt.pos);
        }
    }

    #[test]
    fn svg_uses_fixed_decimals() {
        let pat = PointPattern::from_points(vec![Point {
            m: vec![0, 1],
            pos: vec![Qf::rational(BigRational::new(1.into(), 3.into()))],
        }]);
        let svg = pattern_svg(&pat, &[Qf::zero()], &BigRational::from_integer(2.into()));
        assert!(svg.contains("cx=\"0.333333333333333\""));
        assert!(svg.contains(
            "viewBox=\"-2.000000000000000 -2.000000000000000 4.000000000000000 4.000000000000000\""
        ));
        assert!(svg.ends_with("</svg>\n"));
    }
}
