//! The `--function` and `--domain` mini-grammars.

use std::fmt;
use std::str::FromStr;

use grpf::expr::ExprFunction;
use grpf::funcs::{CircularWaveguide, DemoRational, GrapheneLine, MultilayerWaveguide, WaveguideForm, WaveguideParams};
use grpf::{AnalyticFunction, Domain, Point};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Demo,
    Cwg,
    Mlwg,
    Gtl,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Demo, Builtin::Cwg, Builtin::Mlwg, Builtin::Gtl];

    pub fn name(self) -> &'static str {
        match self {
            Self::Demo => "demo",
            Self::Cwg => "cwg",
            Self::Mlwg => "mlwg",
            Self::Gtl => "gtl",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Self::Demo => "(z-1)(z-i)^2(z+1)^3/(z+i)",
            Self::Cwg => "lossy partially filled circular waveguide, in z/10",
            Self::Mlwg => "three-layer planar waveguide with a lossy film",
            Self::Gtl => "graphene transmission line, product over four Riemann sheets",
        }
    }
}

/// Either a built-in function or `expr:<source>`.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Builtin(Builtin),
    Expr(String),
}

impl FromStr for FunctionSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if let Some(src) = s.strip_prefix("expr:") {
            return Ok(Self::Expr(src.to_string()));
        }
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .map(Self::Builtin)
            .ok_or_else(|| CliError::Config(format!("unknown function '{s}'; use one of demo, cwg, mlwg, gtl or expr:\"...\"")))
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Builtin(b) => write!(f, "{}", b.name()),
            Self::Expr(src) => write!(f, "expr:{src}"),
        }
    }
}

/// A ready-to-sample function. `scale` is set when the search variable is a
/// scaled version of the physical one (`z = scale · z̄`).
pub struct Function {
    pub f: Box<dyn AnalyticFunction<f64>>,
    pub scale: Option<f64>,
}

impl FunctionSpec {
    pub fn build(&self, form: WaveguideForm) -> Result<Function, CliError> {
        let (f, scale): (Box<dyn AnalyticFunction<f64>>, _) = match self {
            Self::Builtin(Builtin::Demo) => (Box::new(DemoRational), None),
            Self::Builtin(Builtin::Cwg) => {
                let f = CircularWaveguide { params: WaveguideParams { form, ..Default::default() }, ..Default::default() };
                (Box::new(f), Some(f.scale))
            }
            Self::Builtin(Builtin::Mlwg) => (Box::new(MultilayerWaveguide::default()), None),
            Self::Builtin(Builtin::Gtl) => (Box::new(GrapheneLine::default()), None),
            Self::Expr(src) => (Box::new(ExprFunction::new(src)?), None),
        };
        Ok(Function { f, scale })
    }
}

fn numbers(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Config(format!("bad number '{}' in {what}", t.trim())))
        })
        .collect()
}

/// `disk:cx,cy,r`, `rect:xmin,xmax,ymin,ymax` or `poly:x1,y1;x2,y2;...`.
pub fn parse_domain(s: &str) -> Result<Domain, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("domain '{s}' needs a kind prefix (disk:, rect: or poly:)")))?;
    let geometry = |e: grpf::geometry::GeometryError| CliError::Config(e.to_string());
    match kind {
        "disk" => match numbers(rest, "disk")?[..] {
            [cx, cy, r] => Domain::disk(Point::new(cx, cy), r).map_err(geometry),
            _ => Err(CliError::Config("disk needs cx,cy,r".into())),
        },
        "rect" => match numbers(rest, "rect")?[..] {
            [x0, x1, y0, y1] => Domain::rectangle(x0, x1, y0, y1).map_err(geometry),
            _ => Err(CliError::Config("rect needs xmin,xmax,ymin,ymax".into())),
        },
        "poly" => {
            let mut pts = Vec::new();
            for v in rest.split(';').filter(|v| !v.trim().is_empty()) {
                match numbers(v, "poly")?[..] {
                    [x, y] => pts.push(Point::new(x, y)),
                    _ => return Err(CliError::Config(format!("poly vertex '{v}' needs x,y"))),
                }
            }
            Domain::polygon(pts).map_err(geometry)
        }
        _ => Err(CliError::Config(format!("unknown domain kind '{kind}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains() {
        assert!(matches!(parse_domain("disk:0,0,1"), Ok(Domain::Disk { .. })));
        assert!(matches!(parse_domain("rect:-2, 2,-2,2"), Ok(Domain::Rectangle { .. })));
        let p = parse_domain("poly:0,0;1,0;0,1").unwrap();
        assert!(p.contains(&Point::new(0.2, 0.2), 0.0));
        for bad in ["disk:0,0", "rect:2,1,0,1", "disk:0,0,-1", "box:0,0,1,1", "rect:a,1,0,1", "poly:0,0;1,0", "0,0,1", "disk:0,0,inf"] {
            assert!(parse_domain(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn functions() {
        assert_eq!("cwg".parse::<FunctionSpec>().unwrap(), FunctionSpec::Builtin(Builtin::Cwg));
        assert_eq!("expr:z^2".parse::<FunctionSpec>().unwrap(), FunctionSpec::Expr("z^2".into()));
        assert!("sin".parse::<FunctionSpec>().is_err());
        let f = FunctionSpec::Expr("z +* 2".into()).build(WaveguideForm::Consistent);
        assert!(matches!(f, Err(CliError::Expression(e)) if e.position == 3));
        assert_eq!(FunctionSpec::Builtin(Builtin::Cwg).build(WaveguideForm::Consistent).unwrap().scale, Some(10.0));
    }
}
