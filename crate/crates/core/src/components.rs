//! Components of the unit-distance graph on small squares `[0, l]²`.
//!
//! The structure changes at `l = 1/√2` (below it every point is isolated),
//! at `l = 2/√5` (where the unit circles about adjacent corners start to
//! meet inside the square) and at `l = √2` (connected). The labels follow
//! the closed-form regions; they are conjectural descriptions, which the
//! SVG metadata records.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::{Point, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "below-1/√2")]
    Below,
    #[serde(rename = "between-1/√2-and-2/√5")]
    Between,
    #[serde(rename = "at-2/√5")]
    At,
    #[serde(rename = "above-2/√5")]
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentId {
    BigUnion,
    /// Points far from `(0,0)` or `(l,l)`.
    DiagMain,
    /// Points far from `(l,0)` or `(0,l)`.
    DiagAnti,
    /// Corners and corner circles, all joined.
    ArcFrame,
    /// Corner `k` (1 = origin, counter-clockwise) with its unit circle.
    ArcCorner(u8),
    Isolated,
}

impl ComponentId {
    pub fn name(&self) -> String {
        match self {
            ComponentId::BigUnion => "big-union".into(),
            ComponentId::DiagMain => "diag-main".into(),
            ComponentId::DiagAnti => "diag-anti".into(),
            ComponentId::ArcFrame => "arc-frame".into(),
            ComponentId::ArcCorner(k) => format!("arc-corner-{k}"),
            ComponentId::Isolated => "isolated".into(),
        }
    }

    /// Whether the component has more than one point.
    pub fn is_nontrivial(&self) -> bool {
        !matches!(self, ComponentId::Isolated)
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentLabel {
    pub regime: Regime,
    pub component: ComponentId,
}

pub fn regime(l: f64) -> Result<Regime> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter("side must be positive".into()));
    }
    let eps = Tolerances::default().geom_eps;
    Ok(if (l - 2.0 / 5f64.sqrt()).abs() <= eps {
        Regime::At
    } else if l < 0.5f64.sqrt() {
        Regime::Below
    } else if l < 2.0 / 5f64.sqrt() {
        Regime::Between
    } else {
        Regime::Above
    })
}

fn corners(l: f64) -> [[f64; 2]; 4] {
    [[0.0, 0.0], [l, 0.0], [l, l], [0.0, l]]
}

/// Component of `p` in the unit-distance graph of `[0, l]²`.
pub fn classify_point(l: f64, p: &Point) -> Result<ComponentLabel> {
    let regime = regime(l)?;
    p.check_dim(2)?;
    let eps = Tolerances::default().geom_eps;
    let (x, y) = (p.coords()[0], p.coords()[1]);
    if !(x >= -eps && x <= l + eps && y >= -eps && y <= l + eps) {
        return Err(Error::OutsideBody);
    }
    let d: Vec<f64> = corners(l)
        .iter()
        .map(|c| (x - c[0]).hypot(y - c[1]))
        .collect();
    let on_corner = d.iter().position(|v| *v <= eps);
    let on_circle = d.iter().position(|v| (v - 1.0).abs() <= eps);
    let component = match regime {
        Regime::Below => ComponentId::Isolated,
        Regime::Above => {
            if d.iter().any(|v| *v >= 1.0 - eps) {
                ComponentId::BigUnion
            } else {
                ComponentId::Isolated
            }
        }
        Regime::Between | Regime::At => {
            if let Some(k) = on_corner.or(on_circle) {
                if regime == Regime::At {
                    ComponentId::ArcFrame
                } else {
                    ComponentId::ArcCorner(k as u8 + 1)
                }
            } else if d[0] > 1.0 || d[2] > 1.0 {
                ComponentId::DiagMain
            } else if d[1] > 1.0 || d[3] > 1.0 {
                ComponentId::DiagAnti
            } else {
                ComponentId::Isolated
            }
        }
    };
    Ok(ComponentLabel { regime, component })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalLength {
    pub value: f64,
    pub expression: &'static str,
    /// False for lengths where the component structure does not change.
    pub transition: bool,
}

/// Side lengths where the component structure might change, ascending.
pub fn critical_lengths() -> Vec<CriticalLength> {
    vec![
        CriticalLength {
            value: 0.5f64.sqrt(),
            expression: "1/√2",
            transition: true,
        },
        CriticalLength {
            value: 2.0 / 5f64.sqrt(),
            expression: "2/√5",
            transition: true,
        },
        CriticalLength {
            value: 8.0 / 65f64.sqrt(),
            expression: "8/√65",
            transition: false,
        },
        CriticalLength {
            value: 2f64.sqrt(),
            expression: "√2",
            transition: true,
        },
    ]
}

const SVG_SIZE: f64 = 1000.0;
const SVG_MARGIN: f64 = 50.0;

const STYLE: &str = "\
.square{fill:none;stroke:#333;stroke-width:2}
.big-union{fill:#9ecae1}
.diag-main{fill:#fdae6b}
.diag-anti{fill:#a1d99b}
.isolated{fill:#ffffff}
.isolated-node{fill:#ffffff;stroke:#333;stroke-width:2}
.arc-frame{fill:none;stroke:#000;stroke-width:6}
.arc-frame-node{fill:#000}
.big-union-arc{fill:none;stroke:#3182bd;stroke-width:3}
.big-union-node{fill:#3182bd}
.arc-corner-1{fill:none;stroke:#e41a1c;stroke-width:6}
.arc-corner-2{fill:none;stroke:#377eb8;stroke-width:6}
.arc-corner-3{fill:none;stroke:#4daf4a;stroke-width:6}
.arc-corner-4{fill:none;stroke:#984ea3;stroke-width:6}
.arc-corner-1-node{fill:#e41a1c}
.arc-corner-2-node{fill:#377eb8}
.arc-corner-3-node{fill:#4daf4a}
.arc-corner-4-node{fill:#984ea3}
";

/// Deterministic picture of the components of `[0, l]²`: shaded areas,
/// corner circles as strokes and corners as dots.
pub fn emit_region_svg(l: f64) -> Result<String> {
    let regime = regime(l)?;
    if l >= 2f64.sqrt() {
        return Err(Error::InvalidParameter("side must be below √2".into()));
    }
    let scale = (SVG_SIZE - 2.0 * SVG_MARGIN) / l;
    let sx = |x: f64| SVG_MARGIN + x * scale;
    let sy = |y: f64| SVG_SIZE - SVG_MARGIN - y * scale;
    let r = scale;
    let cs = corners(l);
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#
    );
    let _ = writeln!(
        w,
        r#"<metadata>{{"side":{l},"regime":"{}","status":"conjectured"}}</metadata>"#,
        serde_json::to_value(regime).expect("regime serializes").as_str().unwrap_or("")
    );
    let _ = writeln!(w, "<style>\n{STYLE}</style>");
    let _ = writeln!(w, "<defs>");
    let _ = writeln!(
        w,
        r#"<clipPath id="sq"><rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/></clipPath>"#,
        sx(0.0),
        sy(l),
        l * scale,
        l * scale
    );
    for (k, c) in cs.iter().enumerate() {
        let _ = writeln!(
            w,
            r#"<clipPath id="disk{}"><circle cx="{:.3}" cy="{:.3}" r="{:.3}"/></clipPath>"#,
            k + 1,
            sx(c[0]),
            sy(c[1]),
            r
        );
    }
    let _ = writeln!(w, "</defs>");
    let square_path = format!(
        "M{:.3},{:.3} H{:.3} V{:.3} H{:.3} Z",
        sx(0.0),
        sy(0.0),
        sx(l),
        sy(l),
        sx(0.0)
    );
    let outside_disk = |k: usize| {
        let c = cs[k];
        format!(
            "{square_path} M{:.3},{:.3} a{r:.3},{r:.3} 0 1,0 {:.3},0 a{r:.3},{r:.3} 0 1,0 {:.3},0 Z",
            sx(c[0]) - r,
            sy(c[1]),
            2.0 * r,
            -2.0 * r
        )
    };
    let _ = writeln!(w, r#"<path class="isolated" d="{square_path}"/>"#);
    match regime {
        Regime::Below => {}
        Regime::Above => {
            for k in 0..4 {
                let _ = writeln!(
                    w,
                    r#"<path class="big-union" fill-rule="evenodd" clip-path="url(#sq)" d="{}"/>"#,
                    outside_disk(k)
                );
            }
        }
        Regime::Between | Regime::At => {
            for (k, class) in [(0, "diag-main"), (2, "diag-main"), (1, "diag-anti"), (3, "diag-anti")] {
                let _ = writeln!(
                    w,
                    r#"<path class="{class}" fill-rule="evenodd" clip-path="url(#sq)" d="{}"/>"#,
                    outside_disk(k)
                );
            }
        }
    }
    if regime != Regime::Below {
        for (k, c) in cs.iter().enumerate() {
            let class = match regime {
                Regime::At => "arc-frame".to_string(),
                Regime::Between => format!("arc-corner-{}", k + 1),
                _ => "big-union-arc".to_string(),
            };
            let _ = writeln!(
                w,
                r#"<circle class="{class}" clip-path="url(#sq)" cx="{:.3}" cy="{:.3}" r="{r:.3}"/>"#,
                sx(c[0]),
                sy(c[1])
            );
        }
    }
    let _ = writeln!(w, r#"<path class="square" d="{square_path}"/>"#);
    for (k, c) in cs.iter().enumerate() {
        let class = match regime {
            Regime::Below => "isolated-node".to_string(),
            Regime::At => "arc-frame-node".to_string(),
            Regime::Between => format!("arc-corner-{}-node", k + 1),
            Regime::Above => "big-union-node".to_string(),
        };
        let _ = writeln!(
            w,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="8"/>"#,
            sx(c[0]),
            sy(c[1])
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(out)
}
