//! JSON run configurations.
//!
//! Parsing is done on a `serde_json::Value` by hand so that every schema
//! violation is reported at once, each with its JSON-pointer path.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::archetype::Archetype;
use crate::elasticity::MinimizeOptions;
use crate::geometry::{ConformalFactor, Domain, Mat2, Point};
use crate::homogenize::{TestMap, SPHERE_CAP_HALF_WIDTH};
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// JSON pointer to the offending value (`""` is the document root).
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "/" } else { &self.path };
        write!(f, "{path}: {}", self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration:\n{}", list(.0))]
    Invalid(Vec<Violation>),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  {x}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchetypeSpec {
    IsotropicNeoHookean,
    IsotropicDistance,
    NFoldDiscrete(usize),
}

impl ArchetypeSpec {
    pub fn archetype(self) -> Archetype {
        match self {
            ArchetypeSpec::IsotropicNeoHookean => Archetype::IsotropicNeoHookean,
            ArchetypeSpec::IsotropicDistance => Archetype::IsotropicDistance,
            ArchetypeSpec::NFoldDiscrete(n) => Archetype::NFoldDiscrete { n },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodySpec {
    Disclination {
        alpha: f64,
        r0: f64,
        r1: f64,
        archetype: ArchetypeSpec,
    },
    Dislocation {
        eps: f64,
        r1: f64,
        archetype: ArchetypeSpec,
    },
    Trivial {
        domain: [f64; 4],
        archetype: ArchetypeSpec,
    },
}

impl BodySpec {
    pub fn archetype(&self) -> ArchetypeSpec {
        match self {
            BodySpec::Disclination { archetype, .. }
            | BodySpec::Dislocation { archetype, .. }
            | BodySpec::Trivial { archetype, .. } => *archetype,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BodySpec::Disclination { .. } => "disclination",
            BodySpec::Dislocation { .. } => "dislocation",
            BodySpec::Trivial { .. } => "trivial",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoopSpec {
    /// A circle once around the defect core (or the domain centre).
    Core,
    Circle {
        center: Point,
        radius: f64,
        segments: usize,
        start_angle: f64,
    },
    Points(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Free,
    Identity,
    Affine(Mat2),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    Flat,
    SphereCap,
    Conformal(ConformalFactor),
}

impl MetricSpec {
    pub fn name(&self) -> String {
        match self {
            MetricSpec::Flat => "flat".into(),
            MetricSpec::SphereCap => "sphere-cap".into(),
            MetricSpec::Conformal(f) => format!("conformal:{}", serde_json::to_string(f).unwrap_or_default()),
        }
    }

    pub fn factor(&self) -> ConformalFactor {
        match self {
            MetricSpec::Flat => ConformalFactor::Unit,
            MetricSpec::SphereCap => ConformalFactor::ConstantCurvature { k: 1.0 },
            MetricSpec::Conformal(f) => *f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Holonomy {
        body: BodySpec,
        loop_spec: LoopSpec,
        /// Also transport along the loop with the ODE on the induced metric.
        ode: bool,
    },
    Burgers {
        body: BodySpec,
        loop_spec: LoopSpec,
        allow_disclination: bool,
    },
    Symmetry {
        archetype: ArchetypeSpec,
        resolution: usize,
    },
    Minimize {
        body: BodySpec,
        resolution: usize,
        boundary: BoundarySpec,
        options: MinimizeOptions,
    },
    Homogenize {
        metric: MetricSpec,
        n: Vec<usize>,
        archetype: ArchetypeSpec,
        half_width: f64,
        loop_radius: f64,
        test_map: TestMap,
    },
    Validate {
        body: BodySpec,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Holonomy { .. } => "holonomy",
            Command::Burgers { .. } => "burgers",
            Command::Symmetry { .. } => "symmetry",
            Command::Minimize { .. } => "minimize",
            Command::Homogenize { .. } => "homogenize",
            Command::Validate { .. } => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub tolerances: Tolerances,
    pub seed: u64,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut c = Checker::default();
    let config = c.run_config(&value);
    match config {
        Some(cfg) if c.violations.is_empty() => Ok(cfg),
        _ => Err(ConfigError::Invalid(c.violations)),
    }
}

fn pointer(path: &str, key: &str) -> String {
    format!("{path}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

#[derive(Default)]
struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(m) => {
                for k in m.keys() {
                    if !allowed.contains(&k.as_str()) {
                        self.fail(&pointer(path, k), format!("unknown key; expected one of {allowed:?}"));
                    }
                }
                Some(m)
            }
            None => {
                self.fail(path, format!("expected an object, found {}", kind_of(v)));
                None
            }
        }
    }

    fn required<'a>(&mut self, m: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a Value> {
        let v = m.get(key);
        if v.is_none() {
            self.fail(&pointer(path, key), "missing required key");
        }
        v
    }

    fn number(&mut self, v: &Value, path: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.fail(path, format!("expected a finite number, found {}", kind_of(v)));
                None
            }
        }
    }

    fn req_number(&mut self, m: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        let v = self.required(m, path, key)?;
        self.number(v, &pointer(path, key))
    }

    fn opt_number(&mut self, m: &Map<String, Value>, path: &str, key: &str, default: f64) -> Option<f64> {
        match m.get(key) {
            Some(v) => self.number(v, &pointer(path, key)),
            None => Some(default),
        }
    }

    fn positive(&mut self, x: Option<f64>, path: &str) -> Option<f64> {
        let x = x?;
        if x > 0.0 {
            Some(x)
        } else {
            self.fail(path, format!("must be strictly positive, got {x}"));
            None
        }
    }

    fn integer(&mut self, v: &Value, path: &str, min: u64) -> Option<u64> {
        match v.as_u64() {
            Some(x) if x >= min => Some(x),
            Some(x) => {
                self.fail(path, format!("must be at least {min}, got {x}"));
                None
            }
            None => {
                self.fail(path, format!("expected a non-negative integer, found {v}"));
                None
            }
        }
    }

    fn opt_integer(&mut self, m: &Map<String, Value>, path: &str, key: &str, min: u64, default: u64) -> Option<u64> {
        match m.get(key) {
            Some(v) => self.integer(v, &pointer(path, key), min),
            None => Some(default),
        }
    }

    fn opt_bool(&mut self, m: &Map<String, Value>, path: &str, key: &str) -> Option<bool> {
        match m.get(key) {
            None => Some(false),
            Some(Value::Bool(b)) => Some(*b),
            Some(v) => {
                self.fail(&pointer(path, key), format!("expected a boolean, found {}", kind_of(v)));
                None
            }
        }
    }

    fn string<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a str> {
        let s = v.as_str();
        if s.is_none() {
            self.fail(path, format!("expected a string, found {}", kind_of(v)));
        }
        s
    }

    fn point(&mut self, v: &Value, path: &str) -> Option<Point> {
        match v.as_array() {
            Some(a) if a.len() == 2 => {
                let x = self.number(&a[0], &format!("{path}/0"));
                let y = self.number(&a[1], &format!("{path}/1"));
                Some(Point::new(x?, y?))
            }
            _ => {
                self.fail(path, "expected a point [x, y]");
                None
            }
        }
    }

    fn matrix(&mut self, v: &Value, path: &str) -> Option<Mat2> {
        let rows = match v.as_array() {
            Some(a) if a.len() == 2 => a,
            _ => {
                self.fail(path, "expected a row-major matrix [[a, b], [c, d]]");
                return None;
            }
        };
        let r0 = self.point(&rows[0], &format!("{path}/0"));
        let r1 = self.point(&rows[1], &format!("{path}/1"));
        let (r0, r1) = (r0?, r1?);
        let m = Mat2::new(r0.x, r0.y, r1.x, r1.y);
        if m.determinant() <= 0.0 {
            self.fail(path, "matrix must have positive determinant");
            return None;
        }
        Some(m)
    }

    fn run_config(&mut self, v: &Value) -> Option<RunConfig> {
        let m = match v.as_object() {
            Some(m) => m,
            None => {
                self.fail("", format!("expected an object, found {}", kind_of(v)));
                return None;
            }
        };
        let cmd = self.required(m, "", "cmd").and_then(|c| self.string(c, "/cmd"))?;
        let common = ["cmd", "tol", "seed"];
        let specific: &[&str] = match cmd {
            "holonomy" => &["body", "loop", "ode"],
            "burgers" => &["body", "loop", "allow_disclination"],
            "symmetry" => &["archetype", "resolution"],
            "minimize" => &["body", "resolution", "boundary", "options"],
            "homogenize" => &["metric", "n", "archetype", "half_width", "loop_radius", "test_map"],
            "validate" => &["body"],
            other => {
                self.fail(
                    "/cmd",
                    format!("unknown command {other:?}; expected holonomy, burgers, symmetry, minimize, homogenize or validate"),
                );
                return None;
            }
        };
        let allowed: Vec<&str> = common.iter().chain(specific).copied().collect();
        self.object(v, "", &allowed);

        let tolerances = self.tolerances(m.get("tol"));
        let seed = self.opt_integer(m, "", "seed", 0, 0);

        let command = match cmd {
            "holonomy" => {
                let body = self.body(m);
                let loop_spec = self.loop_spec(m.get("loop"));
                let ode = self.opt_bool(m, "", "ode");
                Some(Command::Holonomy {
                    body: body?,
                    loop_spec: loop_spec?,
                    ode: ode?,
                })
            }
            "burgers" => {
                let body = self.body(m);
                let loop_spec = self.loop_spec(m.get("loop"));
                let allow = self.opt_bool(m, "", "allow_disclination");
                Some(Command::Burgers {
                    body: body?,
                    loop_spec: loop_spec?,
                    allow_disclination: allow?,
                })
            }
            "symmetry" => {
                let archetype = self
                    .required(m, "", "archetype")
                    .and_then(|a| self.archetype(a, "/archetype"));
                let resolution = self.opt_integer(m, "", "resolution", 360, 3600);
                Some(Command::Symmetry {
                    archetype: archetype?,
                    resolution: resolution? as usize,
                })
            }
            "minimize" => {
                let body = self.body(m);
                let resolution = self.opt_integer(m, "", "resolution", 2, 16);
                let boundary = self.boundary(m.get("boundary"));
                let options = self.minimize_options(m.get("options"));
                Some(Command::Minimize {
                    body: body?,
                    resolution: resolution? as usize,
                    boundary: boundary?,
                    options: options?,
                })
            }
            "homogenize" => self.homogenize(m),
            "validate" => Some(Command::Validate { body: self.body(m)? }),
            _ => unreachable!(),
        };
        Some(RunConfig {
            command: command?,
            tolerances: tolerances?,
            seed: seed?,
        })
    }

    fn tolerances(&mut self, v: Option<&Value>) -> Option<Tolerances> {
        let mut tol = Tolerances::default();
        let Some(v) = v else { return Some(tol) };
        let m = self.object(v, "/tol", &Tolerances::NAMES)?;
        let mut ok = true;
        for (k, x) in m {
            let path = pointer("/tol", k);
            if !Tolerances::NAMES.contains(&k.as_str()) {
                ok = false;
                continue;
            }
            let x = self.number(x, &path);
            match self.positive(x, &path) {
                Some(x) => tol.set(k, x).expect("name and value checked"),
                None => ok = false,
            }
        }
        ok.then_some(tol)
    }

    fn archetype(&mut self, v: &Value, path: &str) -> Option<ArchetypeSpec> {
        let m = v.as_object();
        let kind = m
            .and_then(|m| m.get("kind"))
            .and_then(Value::as_str);
        let spec = match kind {
            Some("isotropic-neo-hookean") => {
                self.object(v, path, &["kind"]);
                ArchetypeSpec::IsotropicNeoHookean
            }
            Some("isotropic-distance") => {
                self.object(v, path, &["kind"]);
                ArchetypeSpec::IsotropicDistance
            }
            Some("n-fold-discrete") => {
                let m = self.object(v, path, &["kind", "n"])?;
                let n = self.required(m, path, "n")?;
                ArchetypeSpec::NFoldDiscrete(self.integer(n, &pointer(path, "n"), 1)? as usize)
            }
            _ => {
                if m.is_none() {
                    self.fail(path, format!("expected an object, found {}", kind_of(v)));
                } else {
                    self.fail(
                        &pointer(path, "kind"),
                        "expected isotropic-neo-hookean, isotropic-distance or n-fold-discrete",
                    );
                }
                return None;
            }
        };
        Some(spec)
    }

    fn body(&mut self, top: &Map<String, Value>) -> Option<BodySpec> {
        let v = self.required(top, "", "body")?;
        let path = "/body";
        let kind = v.get("body").and_then(Value::as_str);
        let archetype = |c: &mut Self, m: &Map<String, Value>| match m.get("archetype") {
            Some(a) => c.archetype(a, "/body/archetype"),
            None => Some(ArchetypeSpec::IsotropicDistance),
        };
        match kind {
            Some("disclination") => {
                let m = self.object(v, path, &["body", "alpha", "r0", "r1", "archetype"])?;
                let alpha = self.req_number(m, path, "alpha");
                let r0 = self.req_number(m, path, "r0");
                let r0 = self.positive(r0, "/body/r0");
                let r1 = self.req_number(m, path, "r1");
                let archetype = archetype(self, m);
                let alpha = alpha.filter(|a| {
                    let ok = *a > 0.0 && *a < 1.0;
                    if !ok {
                        self.fail("/body/alpha", format!("must lie in (0, 1), got {a}"));
                    }
                    ok
                });
                let (r0, r1) = (r0?, r1?);
                if r1 <= r0 {
                    self.fail("/body/r1", format!("must exceed r0 = {r0}, got {r1}"));
                    return None;
                }
                Some(BodySpec::Disclination {
                    alpha: alpha?,
                    r0,
                    r1,
                    archetype: archetype?,
                })
            }
            Some("dislocation") => {
                let m = self.object(v, path, &["body", "eps", "r1", "archetype"])?;
                let eps = self.req_number(m, path, "eps");
                let r1 = self.req_number(m, path, "r1");
                let r1 = self.positive(r1, "/body/r1");
                let archetype = archetype(self, m);
                let (eps, r1) = (eps?, r1?);
                if !(eps >= 0.0 && eps < r1) {
                    self.fail("/body/eps", format!("must lie in [0, r1) with r1 = {r1}, got {eps}"));
                    return None;
                }
                Some(BodySpec::Dislocation {
                    eps,
                    r1,
                    archetype: archetype?,
                })
            }
            Some("trivial") => {
                let m = self.object(v, path, &["body", "domain", "archetype"])?;
                let domain = match m.get("domain") {
                    None => Some([0.0, 0.0, 1.0, 1.0]),
                    Some(d) => self.rect(d, "/body/domain"),
                };
                let archetype = archetype(self, m);
                Some(BodySpec::Trivial {
                    domain: domain?,
                    archetype: archetype?,
                })
            }
            _ => {
                if v.is_object() {
                    self.fail("/body/body", "expected disclination, dislocation or trivial");
                } else {
                    self.fail(path, format!("expected an object, found {}", kind_of(v)));
                }
                None
            }
        }
    }

    fn rect(&mut self, v: &Value, path: &str) -> Option<[f64; 4]> {
        let a = match v.as_array() {
            Some(a) if a.len() == 4 => a,
            _ => {
                self.fail(path, "expected [x0, y0, x1, y1]");
                return None;
            }
        };
        let mut r = [0.0; 4];
        for (i, x) in a.iter().enumerate() {
            r[i] = self.number(x, &format!("{path}/{i}"))?;
        }
        if !(r[2] > r[0] && r[3] > r[1]) {
            self.fail(path, "need x1 > x0 and y1 > y0");
            return None;
        }
        Some(r)
    }

    fn loop_spec(&mut self, v: Option<&Value>) -> Option<LoopSpec> {
        let path = "/loop";
        let Some(v) = v else { return Some(LoopSpec::Core) };
        if let Some(s) = v.as_str() {
            if s == "core" {
                return Some(LoopSpec::Core);
            }
            self.fail(path, format!("unknown loop {s:?}; expected \"core\" or an object"));
            return None;
        }
        match v.get("kind").and_then(Value::as_str) {
            Some("circle") => {
                let m = self.object(v, path, &["kind", "center", "radius", "segments", "start_angle"])?;
                let center = match m.get("center") {
                    Some(c) => self.point(c, "/loop/center"),
                    None => Some(Point::zeros()),
                };
                let radius = self.req_number(m, path, "radius");
                let radius = self.positive(radius, "/loop/radius");
                let segments = self.opt_integer(m, path, "segments", 3, 256);
                let start_angle = self.opt_number(m, path, "start_angle", 0.1);
                Some(LoopSpec::Circle {
                    center: center?,
                    radius: radius?,
                    segments: segments? as usize,
                    start_angle: start_angle?,
                })
            }
            Some("points") => {
                let m = self.object(v, path, &["kind", "points"])?;
                let pts = self.required(m, path, "points")?;
                match pts.as_array() {
                    Some(a) if a.len() >= 3 => {
                        let pts: Vec<Option<Point>> = a
                            .iter()
                            .enumerate()
                            .map(|(i, p)| self.point(p, &format!("/loop/points/{i}")))
                            .collect();
                        Some(LoopSpec::Points(pts.into_iter().collect::<Option<Vec<_>>>()?))
                    }
                    _ => {
                        self.fail("/loop/points", "expected an array of at least 3 points");
                        None
                    }
                }
            }
            _ => {
                self.fail(path, "expected \"core\", {\"kind\": \"circle\", ...} or {\"kind\": \"points\", ...}");
                None
            }
        }
    }

    fn boundary(&mut self, v: Option<&Value>) -> Option<BoundarySpec> {
        let path = "/boundary";
        match v {
            None => Some(BoundarySpec::Identity),
            Some(Value::String(s)) if s == "identity" => Some(BoundarySpec::Identity),
            Some(Value::String(s)) if s == "free" => Some(BoundarySpec::Free),
            Some(v) if v.get("kind").and_then(Value::as_str) == Some("affine") => {
                let m = self.object(v, path, &["kind", "matrix"])?;
                let a = self.required(m, path, "matrix")?;
                Some(BoundarySpec::Affine(self.matrix(a, "/boundary/matrix")?))
            }
            Some(_) => {
                self.fail(path, "expected \"identity\", \"free\" or {\"kind\": \"affine\", \"matrix\": ...}");
                None
            }
        }
    }

    fn minimize_options(&mut self, v: Option<&Value>) -> Option<MinimizeOptions> {
        let path = "/options";
        let d = MinimizeOptions::default();
        let Some(v) = v else { return Some(d) };
        let m = self.object(v, path, &["gtol", "max_iter", "memory"])?;
        let gtol = self.opt_number(m, path, "gtol", d.gtol);
        let gtol = self.positive(gtol, "/options/gtol");
        let max_iter = self.opt_integer(m, path, "max_iter", 1, d.max_iter as u64);
        let memory = self.opt_integer(m, path, "memory", 1, d.memory as u64);
        Some(MinimizeOptions {
            gtol: gtol?,
            max_iter: max_iter? as usize,
            memory: memory? as usize,
        })
    }

    fn homogenize(&mut self, m: &Map<String, Value>) -> Option<Command> {
        let metric = self.required(m, "", "metric").and_then(|v| self.metric(v));
        let n = self.required(m, "", "n").and_then(|v| match v.as_array() {
            Some(a) if !a.is_empty() => a
                .iter()
                .enumerate()
                .map(|(i, x)| self.integer(x, &format!("/n/{i}"), 2).map(|k| k as usize))
                .collect::<Vec<_>>()
                .into_iter()
                .collect::<Option<Vec<_>>>(),
            _ => {
                self.fail("/n", "expected a non-empty array of resolutions");
                None
            }
        });
        let archetype = match m.get("archetype") {
            Some(a) => self.archetype(a, "/archetype"),
            None => Some(ArchetypeSpec::IsotropicNeoHookean),
        };
        let half_width = self.opt_number(m, "", "half_width", SPHERE_CAP_HALF_WIDTH).filter(|w| {
            let ok = *w > 0.0 && *w < 1.0;
            if !ok {
                self.fail("/half_width", format!("must lie in (0, 1), got {w}"));
            }
            ok
        });
        let loop_radius = self.opt_number(m, "", "loop_radius", 0.8);
        let loop_radius = self.positive(loop_radius, "/loop_radius");
        let test_map = match m.get("test_map") {
            None => Some(TestMap::Identity),
            Some(Value::String(s)) if s == "identity" => Some(TestMap::Identity),
            Some(v) if v.get("kind").and_then(Value::as_str) == Some("affine") => {
                let t = self.object(v, "/test_map", &["kind", "matrix"]);
                t.and_then(|t| self.required(t, "/test_map", "matrix"))
                    .and_then(|a| self.matrix(a, "/test_map/matrix"))
                    .map(|a| TestMap::Affine { matrix: a.into() })
            }
            Some(_) => {
                self.fail("/test_map", "expected \"identity\" or {\"kind\": \"affine\", \"matrix\": ...}");
                None
            }
        };
        let (half_width, loop_radius) = (half_width?, loop_radius?);
        if loop_radius >= half_width {
            self.fail("/loop_radius", format!("must be below half_width = {half_width}, got {loop_radius}"));
            return None;
        }
        Some(Command::Homogenize {
            metric: metric?,
            n: n?,
            archetype: archetype?,
            half_width,
            loop_radius,
            test_map: test_map?,
        })
    }

    fn metric(&mut self, v: &Value) -> Option<MetricSpec> {
        let path = "/metric";
        match v {
            Value::String(s) if s == "flat" => Some(MetricSpec::Flat),
            Value::String(s) if s == "sphere-cap" => Some(MetricSpec::SphereCap),
            v if v.get("kind").and_then(Value::as_str) == Some("conformal") => {
                let m = self.object(v, path, &["kind", "factor"])?;
                let f = self.required(m, path, "factor")?;
                match serde_json::from_value::<ConformalFactor>(f.clone()) {
                    Ok(f) => Some(MetricSpec::Conformal(f)),
                    Err(e) => {
                        self.fail("/metric/factor", e.to_string());
                        None
                    }
                }
            }
            _ => {
                self.fail(path, "expected \"flat\", \"sphere-cap\" or {\"kind\": \"conformal\", \"factor\": ...}");
                None
            }
        }
    }
}

/// Rectangle `[x0, y0, x1, y1]` as a domain.
pub(crate) fn rect_domain(r: &[f64; 4]) -> Domain {
    Domain::rect(r[0], r[1], r[2], r[3])
}
