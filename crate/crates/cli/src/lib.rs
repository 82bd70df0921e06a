//! Batch driver: enumerate fields, then run class groups, CM points, theta
//! constants, invariants, heights and the inequality checks per field.

pub mod cache;
pub mod report;

use cmcert::analytic::{self, CosetBound, KappaReport, MainBound, MinNormAverage, SBoundReport, Sandwich};
use cmcert::arith::{Integer, Rational};
use cmcert::ball::{Ball, ComplexBall};
use cmcert::classgroup::{ClassGroup, ClassLabel};
use cmcert::fieldenum::{enumerate_fields, EnumeratedField, FieldDbRow};
use cmcert::nf::{CMField, CMType};
use cmcert::polarize::{self, CosetReport};
use cmcert::siegel::{self, Check, F2Certificate, IneqReport};
use cmcert::theta::{self, Normalization, PointData, Recognized};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Bumped whenever cached dossiers would change.
pub const CODE_VERSION: &str = concat!("cmcert-", env!("CARGO_PKG_VERSION"), "-d3");

/// Below this discriminant the coset and final height bounds are recorded
/// but do not count as checks.
pub const LARGE_DISC: u64 = 93_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Fields,
    ClassGroup,
    Triples,
    Points,
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checks {
    pub inequalities: bool,
    pub heights: bool,
    pub invariants: bool,
    pub analytic: bool,
}

impl Checks {
    pub fn all() -> Checks {
        Checks { inequalities: true, heights: true, invariants: true, analytic: true }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(with = "cmcert::serde_int")]
    pub disc_bound: Integer,
    /// restrict to these discriminants (empty: all)
    pub only: Vec<String>,
    pub prec: u32,
    pub prec_cap: u32,
    pub seed: u64,
    pub jobs: usize,
    pub out_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub stage: Stage,
    pub checks: Checks,
    /// eps values for the smoothed-sum bounds
    pub eps: Vec<String>,
    #[serde(with = "cmcert::serde_rat")]
    pub gamma_f: Rational,
    #[serde(with = "cmcert::serde_rat")]
    pub h0: Rational,
    /// testing hook: panic inside the pipeline for this discriminant
    pub fault_disc: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            disc_bound: Integer::from(4_000_000),
            only: Vec::new(),
            prec: 256,
            prec_cap: 2048,
            seed: 0,
            jobs: 1,
            out_dir: None,
            cache_dir: None,
            stage: Stage::Full,
            checks: Checks::all(),
            eps: vec!["0.1".into(), "0.5".into(), "1".into()],
            gamma_f: Rational::from(2),
            h0: Rational::new(),
            fault_disc: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> cmcert::Result<()> {
        if self.prec_cap < self.prec {
            return Err(cmcert::Error::Domain("precision cap below start precision".into()));
        }
        if self.disc_bound < 125 {
            return Err(cmcert::Error::Domain("disc bound below 125".into()));
        }
        if self.prec < 64 {
            return Err(cmcert::Error::Domain("precision below 64 bits".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl Status {
    pub fn of(c: &Check) -> Status {
        Status::from_opt(c.holds)
    }

    pub fn from_opt(v: Option<bool>) -> Status {
        match v {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::Undecided,
        }
    }

    pub fn and(self, o: Status) -> Status {
        match (self, o) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Undecided, _) | (_, Status::Undecided) => Status::Undecided,
            _ => Status::Pass,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckEntry {
    pub status: Status,
    /// recorded only, does not affect the exit code
    pub informational: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassGroupInfo {
    #[serde(with = "cmcert::serde_int")]
    pub h: Integer,
    pub divisors: Vec<i64>,
    pub two_torsion: u64,
    pub h0: Vec<ClassLabel>,
    pub seed: u64,
    pub relations_used: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleInfo {
    pub class: Option<ClassLabel>,
    /// xi as numerator coordinates over the power basis and a denominator
    pub xi: Vec<String>,
    pub xi_den: String,
    pub eps_exponent: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointInfo {
    pub class: Option<ClassLabel>,
    /// minimal norm of an integral ideal in the class of I^{-1}
    pub norm_inv: String,
    pub z1: ComplexBall,
    pub z12: ComplexBall,
    pub z2: ComplexBall,
    pub f2: F2Certificate,
    pub inequalities: IneqReport,
    /// log(|chi10| det Y^5)
    pub log_chi10: Ball,
    pub chi10_abs: Ball,
    pub chi10_lower: Ball,
    pub chi10_check: Check,
    /// the same comparison with the 2^-12 normalization
    pub chi10_literature_check: Check,
    pub igusa_clebsch: [ComplexBall; 4],
    /// recognized absolute invariants (decimal rationals)
    pub streng: Option<[String; 3]>,
    pub calibrated: Option<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeInfo {
    pub cm_type: CMType,
    pub coset: CosetReport,
    pub boundary_warning: bool,
    pub triples: Vec<TripleInfo>,
    pub prec: u32,
    pub points: Vec<PointInfo>,
    pub h_inf: Option<Ball>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightInfo {
    pub faltings: Ball,
    pub lower_bound: Ball,
    pub lower_bound_ok: Option<bool>,
    pub finalbh_rhs: Ball,
    /// h_i^inf <= finalbh rhs, one per CM type class
    pub finalbh: Vec<Check>,
    pub finalbh_applicable: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalPoint {
    pub index: usize,
    pub streng: [String; 3],
    pub igusa: Option<[String; 3]>,
    pub calibrated: Option<[String; 3]>,
    /// Streng and Igusa triples both have denominator 1
    pub integral: bool,
    /// recognized again at doubled precision
    pub confirmed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantInfo {
    pub prec: u32,
    pub degree: usize,
    /// Streng class polynomials: recognized coefficients (low to high) or null
    pub class_polys: Vec<Option<Vec<String>>>,
    /// per invariant: index of a certified non-integral coefficient
    pub non_integral: Vec<Option<usize>>,
    pub igusa_class_polys: Vec<Option<Vec<String>>>,
    pub igusa_non_integral: Vec<Option<usize>>,
    pub integral: Option<bool>,
    pub rational_points: Vec<RationalPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyticInfo {
    pub kappa: KappaReport,
    pub s_bounds: Vec<SBoundReport>,
    pub sandwich: Sandwich,
    pub min_norm: MinNormAverage,
    pub coset_bound: CosetBound,
}

/// Everything computed for one field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDossier {
    pub version: String,
    pub field: FieldDbRow,
    pub class_group: Option<ClassGroupInfo>,
    pub types: Vec<TypeInfo>,
    pub heights: Option<HeightInfo>,
    pub invariants: Option<InvariantInfo>,
    /// Some(true): carries a curve with integral absolute invariants
    pub good_reduction: Option<bool>,
    pub analytic: Option<AnalyticInfo>,
    pub checks: BTreeMap<String, CheckEntry>,
    pub error: Option<String>,
    pub timing_ms: u64,
}

impl FieldDossier {
    pub fn new(field: FieldDbRow) -> FieldDossier {
        FieldDossier {
            version: CODE_VERSION.into(),
            field,
            class_group: None,
            types: Vec::new(),
            heights: None,
            invariants: None,
            good_reduction: None,
            analytic: None,
            checks: BTreeMap::new(),
            error: None,
            timing_ms: 0,
        }
    }

    pub fn disc(&self) -> &Integer {
        &self.field.record.disc_k
    }

    /// Worst status over the blocking checks; an error counts as undecided.
    pub fn status(&self) -> Status {
        let mut s = if self.error.is_some() { Status::Undecided } else { Status::Pass };
        for c in self.checks.values().filter(|c| !c.informational) {
            s = s.and(c.status);
        }
        s
    }

    fn record(&mut self, name: &str, status: Status, informational: bool) {
        let e = self.checks.entry(name.to_string()).or_insert(CheckEntry { status, informational });
        e.status = e.status.and(status);
    }

    /// Copy with the timing zeroed: the part that must be reproducible.
    pub fn exact(&self) -> FieldDossier {
        FieldDossier { timing_ms: 0, ..self.clone() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub config: PipelineConfig,
    pub dossiers: Vec<FieldDossier>,
    /// discriminants carrying curves with integral invariants
    pub shortlist: Vec<String>,
    /// fields whose integrality stayed undecided
    pub shortlist_undecided: Vec<String>,
    pub status: Status,
}

pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Pass => 0,
        Status::Undecided => 2,
        Status::Fail => 3,
    }
}

fn to_strs(v: &[Rational; 3]) -> [String; 3] {
    [v[0].to_string(), v[1].to_string(), v[2].to_string()]
}

/// Enumerated fields below the bound, restricted by `cfg.only`.
pub fn select_fields(cfg: &PipelineConfig) -> cmcert::Result<Vec<EnumeratedField>> {
    let fs = enumerate_fields(&cfg.disc_bound, 128)?;
    Ok(fs.into_iter().filter(|f| cfg.only.is_empty() || cfg.only.iter().any(|d| *d == f.disc.to_string())).collect())
}

/// One dossier per enumerated field, in discriminant order. Fields run on a
/// pool of `cfg.jobs` threads; each field is sequential.
pub fn run_pipeline(cfg: &PipelineConfig) -> cmcert::Result<PipelineOutput> {
    cfg.validate()?;
    let fields = select_fields(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| cmcert::Error::Failed(e.to_string()))?;
    let dossiers: Vec<FieldDossier> = pool.install(|| fields.par_iter().map(|f| run_field_cached(cfg, f)).collect());
    Ok(summarize(cfg, dossiers))
}

pub fn summarize(cfg: &PipelineConfig, dossiers: Vec<FieldDossier>) -> PipelineOutput {
    let shortlist = dossiers.iter().filter(|d| d.good_reduction == Some(true)).map(|d| d.disc().to_string()).collect();
    let shortlist_undecided = if cfg.checks.invariants && cfg.stage >= Stage::Full {
        dossiers.iter().filter(|d| d.good_reduction.is_none()).map(|d| d.disc().to_string()).collect()
    } else {
        Vec::new()
    };
    let status = dossiers.iter().fold(Status::Pass, |s, d| s.and(d.status()));
    PipelineOutput { config: cfg.clone(), dossiers, shortlist, shortlist_undecided, status }
}

pub fn run_field_cached(cfg: &PipelineConfig, f: &EnumeratedField) -> FieldDossier {
    let row = f.db_row();
    if let Some(dir) = &cfg.cache_dir {
        let key = cache::key(&row, cfg);
        if let Some(d) = cache::load(dir, &key) {
            return d;
        }
        let d = run_field(cfg, f);
        if d.error.is_none() {
            // a failed write only loses the cache entry
            let _ = cache::store(dir, &key, &d);
        }
        return d;
    }
    run_field(cfg, f)
}

/// Runs one field; errors and panics end up in the dossier.
pub fn run_field(cfg: &PipelineConfig, f: &EnumeratedField) -> FieldDossier {
    let start = std::time::Instant::now();
    let mut d = FieldDossier::new(f.db_row());
    let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| fill(cfg, f, &mut d)));
    match r {
        Ok(Ok(())) => {}
        Ok(Err(e)) => d.error = Some(e.to_string()),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            d.error = Some(format!("panic: {}", msg));
        }
    }
    d.timing_ms = start.elapsed().as_millis() as u64;
    d
}

fn fill(cfg: &PipelineConfig, f: &EnumeratedField, d: &mut FieldDossier) -> cmcert::Result<()> {
    if cfg.fault_disc.as_deref() == Some(f.disc.to_string().as_str()) {
        panic!("injected fault for disc {}", f.disc);
    }
    if cfg.stage == Stage::Fields {
        return Ok(());
    }
    let k = &f.field;
    let g = ClassGroup::compute(k, cfg.seed)?;
    let recs = g.min_norms(k)?;
    let mut h0 = g.type_norm_image(&recs);
    h0.sort();
    h0.dedup();
    d.class_group = Some(ClassGroupInfo {
        h: g.h.clone(),
        divisors: g.divisors.clone(),
        two_torsion: g.two_torsion(),
        h0: h0.clone(),
        seed: cfg.seed,
        relations_used: g.relations_used,
    });
    if cfg.stage == Stage::ClassGroup {
        return Ok(());
    }
    let reps: Vec<CMType> = k.cm_type_classes().iter().map(|c| c[0]).collect();
    let mut all_points: Vec<Vec<PointData>> = Vec::new();
    for phi in &reps {
        let coset = polarize::polarizable_coset(k, &g, phi)?;
        let (ts, boundary) = polarize::triples_for_type(k, &g, phi)?;
        let triples = ts
            .iter()
            .map(|t| TripleInfo {
                class: t.class.clone(),
                xi: t.xi.num.iter().map(|x| x.to_string()).collect(),
                xi_den: t.xi.den.to_string(),
                eps_exponent: t.eps_exponent,
            })
            .collect();
        d.types.push(TypeInfo {
            cm_type: *phi,
            coset,
            boundary_warning: boundary,
            triples,
            prec: 0,
            points: Vec::new(),
            h_inf: None,
        });
        if !needs_points(cfg) {
            continue;
        }
        let (points, infos, prec) = points_with_retry(cfg, k, &g, &recs, phi)?;
        let ti = d.types.last_mut().expect("pushed");
        ti.prec = prec;
        ti.points = infos;
        all_points.push(points);
    }
    if !needs_points(cfg) {
        if cfg.stage == Stage::Full && cfg.checks.analytic {
            analytic_checks(cfg, k, &g, &h0, d)?;
        }
        return Ok(());
    }
    for t in d.types.clone() {
        for p in &t.points {
            if cfg.checks.inequalities {
                let q = &p.inequalities;
                d.record("ineq_a_y1y2", Status::of(&q.a_y1y2), false);
                d.record("ineq_b_det_9_16", Status::of(&q.b_det_9_16), false);
                d.record("ineq_b_det_9_8", Status::of(&q.b_det_9_8), true);
                d.record("ineq_c_z12", Status::of(&q.c_z12), false);
                d.record("ineq_d_trace", Status::of(&q.d_trace), false);
                d.record("f2_certified", Status::from_opt(Some(p.f2.within_tolerance)), true);
            }
            d.record("chi10_lower_bound", Status::of(&p.chi10_check), false);
            d.record("chi10_lower_bound_literature", Status::of(&p.chi10_literature_check), true);
        }
    }
    if cfg.stage == Stage::Points {
        return Ok(());
    }
    if cfg.checks.heights {
        heights(cfg, k, d)?;
    }
    if cfg.checks.invariants {
        invariants(cfg, k, &g, &reps[0], all_points.swap_remove(0), d)?;
    }
    if cfg.checks.analytic {
        analytic_checks(cfg, k, &g, &h0, d)?;
    }
    Ok(())
}

fn needs_points(cfg: &PipelineConfig) -> bool {
    match cfg.stage {
        Stage::Fields | Stage::ClassGroup | Stage::Triples => false,
        Stage::Points => true,
        Stage::Full => cfg.checks.inequalities || cfg.checks.heights || cfg.checks.invariants,
    }
}

fn norm_inv(g: &ClassGroup, recs: &[cmcert::classgroup::ClassRecord], class: &Option<ClassLabel>) -> Integer {
    match class {
        Some(c) => {
            let inv = g.neg(c);
            recs.iter().find(|r| r.class == inv).map(|r| r.min_norm.clone()).unwrap_or_else(|| Integer::from(1))
        }
        None => Integer::from(1),
    }
}

fn point_info(
    k: &CMField,
    g: &ClassGroup,
    recs: &[cmcert::classgroup::ClassRecord],
    p: &PointData,
) -> cmcert::Result<PointInfo> {
    let ni = norm_inv(g, recs, &p.triple.class);
    let inequalities = siegel::check_inequalities(&p.point, &k.disc, &ni)?;
    let chi = theta::chi10(&p.theta).abs();
    let lit = theta::chi10_literature(&p.theta).abs();
    let lb = theta::chi10_lower_bound(&p.point);
    let rec = |n| theta::recognize_triple(&p.igusa_clebsch, n).ok().flatten().map(|v| to_strs(&v));
    Ok(PointInfo {
        class: p.triple.class.clone(),
        norm_inv: ni.to_string(),
        z1: p.point.z1.clone(),
        z12: p.point.z12.clone(),
        z2: p.point.z2.clone(),
        f2: siegel::certify_f2(&p.point),
        inequalities,
        log_chi10: p.log_chi10.clone(),
        chi10_check: Check::le(&lb, &chi),
        chi10_literature_check: Check::le(&lb, &lit),
        chi10_abs: chi,
        chi10_lower: lb,
        igusa_clebsch: p.igusa_clebsch.clone(),
        streng: rec(Normalization::Streng),
        calibrated: rec(Normalization::Calibrated),
    })
}

/// CM points of one type, doubling precision while an inequality or the
/// chi10 bound is undecided.
fn points_with_retry(
    cfg: &PipelineConfig,
    k: &CMField,
    g: &ClassGroup,
    recs: &[cmcert::classgroup::ClassRecord],
    phi: &CMType,
) -> cmcert::Result<(Vec<PointData>, Vec<PointInfo>, u32)> {
    let mut prec = cfg.prec;
    loop {
        let (pts, _) = theta::field_points(k, g, phi, prec)?;
        let infos: Vec<PointInfo> = pts.iter().map(|p| point_info(k, g, recs, p)).collect::<cmcert::Result<_>>()?;
        let undecided =
            infos.iter().any(|i| i.inequalities.undecided() || i.chi10_check.holds.is_none() || !i.log_chi10.is_finite());
        if !undecided || prec >= cfg.prec_cap {
            return Ok((pts, infos, prec));
        }
        prec = (prec * 2).min(cfg.prec_cap);
    }
}

fn heights(cfg: &PipelineConfig, k: &CMField, d: &mut FieldDossier) -> cmcert::Result<()> {
    let mut parts = Vec::new();
    for t in d.types.iter_mut() {
        if t.points.is_empty() {
            continue;
        }
        let logs: Vec<Ball> = t.points.iter().map(|p| p.log_chi10.clone()).collect();
        let h = theta::infinity_part(&logs)?;
        t.h_inf = Some(h.clone());
        parts.push(h);
    }
    if parts.is_empty() {
        return Err(cmcert::Error::NoPolarization);
    }
    let prec = parts[0].prec();
    let rep = theta::faltings_height(&parts, &Ball::from_rat(prec, &cfg.h0), &k.disc, &k.quad.disc, &cfg.gamma_f)?;
    let rf = k.quad.regulator(prec);
    let hf = k.quad.h;
    let rhs = analytic::finalbh_rhs(&k.disc, hf, &rf)?;
    let finalbh: Vec<Check> = parts.iter().map(|p| Check::le(p, &rhs)).collect();
    let applicable = k.disc > LARGE_DISC;
    d.record("height_lower_bound", Status::from_opt(rep.lower_bound_ok), false);
    for c in &finalbh {
        d.record("finalbh", Status::of(c), !applicable);
    }
    d.heights = Some(HeightInfo {
        faltings: rep.faltings_height,
        lower_bound: rep.lower_bound,
        lower_bound_ok: rep.lower_bound_ok,
        finalbh_rhs: rhs,
        finalbh,
        finalbh_applicable: applicable,
    });
    Ok(())
}

/// Class polynomials of the points of one CM type plus individually rational
/// points. Potentially good reduction needs both the Igusa and the Streng
/// triples integral: the Streng triple alone can be integral while
/// I2^5/I10 is not. A certified non-integral coefficient in either class
/// polynomial refutes integrality of the whole set.
fn invariants(
    cfg: &PipelineConfig,
    k: &CMField,
    g: &ClassGroup,
    phi: &CMType,
    mut pts: Vec<PointData>,
    d: &mut FieldDossier,
) -> cmcert::Result<()> {
    let mut prec = pts.first().map(|p| p.point.prec()).unwrap_or(cfg.prec);
    let (cs, ci) = loop {
        let cs = theta::class_polynomials(&pts, Normalization::Streng)?;
        let ci = theta::class_polynomials(&pts, Normalization::Igusa)?;
        let decided = cs.integral() == Some(false)
            || ci.integral() == Some(false)
            || (cs.integral() == Some(true) && ci.integral() == Some(true));
        if decided || prec >= cfg.prec_cap {
            break (cs, ci);
        }
        prec = (prec * 2).min(cfg.prec_cap);
        pts = theta::field_points(k, g, phi, prec)?.0;
    };
    let mut rational = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let Some(s) = theta::recognize_triple(&p.igusa_clebsch, Normalization::Streng)? else { continue };
        let ig = theta::recognize_triple(&p.igusa_clebsch, Normalization::Igusa)?;
        let confirmed = confirm_point(k, p, prec * 2, Normalization::Streng, &s)?
            && match &ig {
                Some(v) => confirm_point(k, p, prec * 2, Normalization::Igusa, v)?,
                None => true,
            };
        let calibrated = theta::recognize_triple(&p.igusa_clebsch, Normalization::Calibrated)?.map(|v| to_strs(&v));
        let int = |v: &[Rational; 3]| v.iter().all(|q| *q.denom() == 1);
        rational.push(RationalPoint {
            index: i,
            integral: int(&s) && ig.as_ref().is_some_and(int),
            streng: to_strs(&s),
            igusa: ig.as_ref().map(to_strs),
            calibrated,
            confirmed,
        });
    }
    let polys = |cp: &theta::ClassPolynomials| -> Vec<Option<Vec<String>>> {
        cp.recognized
            .iter()
            .map(|r| match r {
                Recognized::Exact(v) => Some(v.iter().map(|q| q.to_string()).collect()),
                _ => None,
            })
            .collect()
    };
    let bad = |cp: &theta::ClassPolynomials| -> Vec<Option<usize>> {
        cp.recognized.iter().map(|r| if let Recognized::NonIntegral { index } = r { Some(*index) } else { None }).collect()
    };
    let integral = match (cs.integral(), ci.integral()) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    };
    let point_integral = rational.iter().any(|r| r.integral && r.confirmed);
    d.good_reduction = match integral {
        Some(true) => Some(true),
        _ if point_integral => Some(true),
        Some(false) => Some(false),
        None => None,
    };
    d.record("integrality_decided", if d.good_reduction.is_some() { Status::Pass } else { Status::Undecided }, false);
    d.invariants = Some(InvariantInfo {
        prec,
        degree: pts.len(),
        class_polys: polys(&cs),
        non_integral: bad(&cs),
        igusa_class_polys: polys(&ci),
        igusa_non_integral: bad(&ci),
        integral,
        rational_points: rational,
    });
    Ok(())
}

/// Recomputes one point at higher precision and checks a recognized triple.
fn confirm_point(k: &CMField, p: &PointData, prec: u32, norm: Normalization, want: &[Rational; 3]) -> cmcert::Result<bool> {
    let b = polarize::symplectic_basis(k, &p.triple)?;
    let q = siegel::reduce_cm_point(k, &b, &p.triple.cm_type, prec)?;
    let th = theta::theta_constants(&q, prec)?;
    let ic = theta::igusa_clebsch(&th)?;
    let j = theta::absolute_invariants(&ic, norm)?;
    Ok(j.iter().zip(want).all(|(x, w)| x.imag().contains_zero() && x.real().contains_rat(w)))
}

fn analytic_checks(
    cfg: &PipelineConfig,
    k: &CMField,
    g: &ClassGroup,
    h0: &[ClassLabel],
    d: &mut FieldDossier,
) -> cmcert::Result<()> {
    let prec = 128;
    let eps: Vec<Rational> = cfg
        .eps
        .iter()
        .map(|s| cmcert::arith::parse_decimal(s).ok_or_else(|| cmcert::Error::Domain(format!("bad eps {}", s))))
        .collect::<cmcert::Result<_>>()?;
    let emax = eps.iter().max().cloned().unwrap_or_else(|| Rational::from(1));
    let xmax = emax.to_f64() * k.disc.to_f64().sqrt();
    let cutoff = analytic::choose_cutoff(xmax, 40);
    let (table, ix) = analytic::ideal_counts(k, g, cutoff)?;
    let mut sb = Vec::new();
    for e in &eps {
        let r = analytic::s_bounds(k, g, &table, &ix, e, prec)?;
        for c in &r.nontrivial {
            d.record("s_bound_nontrivial", Status::of(c), false);
        }
        d.record("s_bound_trivial", Status::of(&r.trivial), false);
        d.record("s_bound_trivial_kappa", Status::of(&r.trivial_kappa_term), true);
        sb.push(r);
    }
    let x = Ball::from_int(prec, &k.disc).sqrt()?.mul_rat(&emax);
    let sums = analytic::class_sums(&table, &x, prec)?;
    let h0i: Vec<usize> = h0.iter().map(|c| ix.index(c)).collect();
    let coset0 = d.types.first().and_then(|t| t.coset.classes.first().cloned()).unwrap_or_default();
    let hi = if coset0.is_empty() { 0 } else { ix.index(&coset0) };
    let sw = analytic::sandwich(&sums, &ix, hi, &h0i)?;
    d.record("sandwich", Status::of(&sw.lower).and(Status::of(&sw.upper)), false);
    d.record("fourier_identity", Status::from_opt(Some(sw.fourier_identity)), false);
    let (_, kappa) = analytic::residue_kappa(k, &g.h, prec)?;
    d.record("louboutin", Status::of(&kappa.louboutin), !kappa.louboutin_applicable);
    let recs = g.min_norms(k)?;
    let polar: Vec<Integer> = d
        .types
        .first()
        .map(|t| {
            t.coset.classes.iter().filter_map(|c| recs.iter().find(|r| &r.class == c).map(|r| r.min_norm.clone())).collect()
        })
        .unwrap_or_default();
    let polar = if polar.is_empty() { vec![Integer::from(1)] } else { polar };
    let mn = analytic::min_norm_average(k, &g.h, &polar, prec)?;
    d.record("min_norm_average", Status::of(&mn.displayed), !mn.applicable);
    let rf = k.quad.regulator(prec);
    let hf = k.quad.h;
    let cb = analytic::coset_size_bound(&k.disc, polar.len(), hf, &rf)?;
    d.record("coset_bound", Status::of(&cb.check), !cb.applicable);
    d.analytic = Some(AnalyticInfo { kappa, s_bounds: sb, sandwich: sw, min_norm: mn, coset_bound: cb });
    Ok(())
}

/// The F = Q(sqrt 5) main bound with the given h0 and gamma_F.
pub fn main_bound(h0: &Rational, gamma_f: &Rational) -> cmcert::Result<MainBound> {
    let q = cmcert::nf::quad::real_quad_data(&Integer::from(5))?;
    analytic::main_theorem_bound(q.h, &q.regulator(128), &q.disc, gamma_f, h0)
}
