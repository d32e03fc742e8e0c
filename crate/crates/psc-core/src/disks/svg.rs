use std::fmt::Write as _;

use super::DiskConfig;

const SIZE: f64 = 512.0;
const HALF: f64 = 256.0;
const SCALE: f64 = 240.0;

fn px(x: f64) -> f64 {
    HALF + SCALE * x
}

fn py(y: f64) -> f64 {
    HALF - SCALE * y
}

/// SVG 1.1 drawing of a planar configuration; disk `i` is labelled `i + 1`.
/// Returns `None` unless `c.dim == 2`.
pub fn render_svg(c: &DiskConfig) -> Option<String> {
    if c.dim != 2 {
        return None;
    }
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .ok()?;
    writeln!(
        out,
        r#"  <circle cx="{HALF}" cy="{HALF}" r="{SCALE}" fill="none" stroke="black" stroke-width="2"/>"#
    )
    .ok()?;
    for (i, d) in c.disks.iter().enumerate() {
        let (x, y, r) = (px(d.center[0]), py(d.center[1]), SCALE * d.radius);
        writeln!(
            out,
            r##"  <circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="#dde8f5" stroke="#1f4e8c" stroke-width="1.5"/>"##
        )
        .ok()?;
        let font = (r * 0.6).clamp(6.0, 28.0);
        writeln!(
            out,
            r#"  <text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="{font:.1}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
            i + 1
        )
        .ok()?;
    }
    out.push_str("</svg>\n");
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disks::Disk;

    #[test]
    fn one_labelled_circle_per_disk() {
        let c = DiskConfig::new(
            2,
            vec![
                Disk::new(vec![0.0, 0.5], 0.3),
                Disk::new(vec![-0.45, -0.3], 0.3),
                Disk::new(vec![0.45, -0.3], 0.3),
            ],
        );
        let svg = render_svg(&c).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<text").count(), 3);
        assert!(svg.contains(">3</text>"));
        // y axis points up
        assert!(svg.contains(r#"cy="136.000""#));
    }

    #[test]
    fn other_dimensions_are_not_drawn() {
        assert!(render_svg(&DiskConfig::identity(3)).is_none());
    }
}
