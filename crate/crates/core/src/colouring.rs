//! Proper colourings of `J_q(n,m,t)` built from a Johnson colouring of the
//! identifying vectors and the cosets of a lifted Gabidulin code.
//!
//! Three regimes cover every valid parameter set:
//! - direct (`n >= 2m`): colour `(u, A)` by `class(u) * cosets + coset(A)`;
//! - dual (`m < n < 2m`, `n - 2m + t >= 1`): colour the orthogonal
//!   complement in `J_q(n, n-m, n-2m+t)`;
//! - complete (`t <= 2m - n`): all vertices are pairwise adjacent, so each
//!   gets its own colour.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::{
    self, BinaryVector, GrassmannError, GrassmannParams, Grassmannian, Subspace,
};
use crate::johnson::{self, BoseChowlaOrigin, JohnsonColouring, JohnsonError, JohnsonMethod};
use crate::matq;
use crate::rankmetric::{self, CodeError, GabidulinCode};

pub const DEFAULT_VERTEX_CAP: u64 = 100_000;
/// Verification runs by default up to this many vertices.
pub const AUTO_VERIFY_LIMIT: u64 = 20_000;
/// Codes up to this size get an exhaustive distance check.
const DISTANCE_CHECK_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum ColourError {
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Johnson(#[from] JohnsonError),
    #[error("{vertices} vertices exceed the cap of {cap}")]
    TooLarge { vertices: BigUint, cap: u64 },
    #[error("vertex mismatch: {0}")]
    Dimension(String),
    #[error("certificate coverage: {0}")]
    Coverage(String),
    #[error("certificate is inconsistent: {0}")]
    Inconsistent(String),
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Direct,
    Dual,
    Complete,
}

impl Regime {
    pub fn of(params: &GrassmannParams) -> Regime {
        let (n, m, t) = (params.n, params.m, params.t);
        if n >= 2 * m {
            Regime::Direct
        } else if t + n <= 2 * m {
            Regime::Complete
        } else {
            Regime::Dual
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Direct => "direct",
            Regime::Dual => "dual",
            Regime::Complete => "complete",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a vertex lands in the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Identifying vector, Johnson class and coset index, taken in the
    /// direct-regime graph (after dualizing, in the dual regime).
    Coset {
        idvec: BinaryVector,
        class: u32,
        coset: u64,
    },
    /// Enumeration index in the complete regime.
    Index(u64),
}

#[derive(Debug)]
pub struct ColourContext {
    params: GrassmannParams,
    regime: Regime,
    method: JohnsonMethod,
    johnson: Option<JohnsonColouring>,
    code: Option<GabidulinCode>,
    inner: Option<Box<ColourContext>>,
    grassmannian: Grassmannian,
}

pub fn make_context(
    params: &GrassmannParams,
    method: JohnsonMethod,
) -> Result<ColourContext, ColourError> {
    let (q, n, m, t) = (params.q, params.n, params.m, params.t);
    let regime = Regime::of(params);
    let grassmannian = Grassmannian::new(params.field(), n, m)?;
    let mut ctx = ColourContext {
        params: params.clone(),
        regime,
        method,
        johnson: None,
        code: None,
        inner: None,
        grassmannian,
    };
    match regime {
        Regime::Direct => {
            ctx.johnson = Some(johnson::colouring(n, m, t, method)?);
            ctx.code = Some(GabidulinCode::build(q, m, n - m, m - t + 1)?);
        }
        Regime::Dual => {
            let inner = GrassmannParams::new(q, n, n - m, n + t - 2 * m)?;
            ctx.inner = Some(Box::new(make_context(&inner, method)?));
        }
        Regime::Complete => {}
    }
    Ok(ctx)
}

impl ColourContext {
    pub fn params(&self) -> &GrassmannParams {
        &self.params
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn method(&self) -> JohnsonMethod {
        self.method
    }

    pub fn grassmannian(&self) -> &Grassmannian {
        &self.grassmannian
    }

    /// Context for the dual parameters, in the dual regime.
    pub fn inner(&self) -> Option<&ColourContext> {
        self.inner.as_deref()
    }

    fn effective(&self) -> &ColourContext {
        self.inner.as_deref().unwrap_or(self)
    }

    /// Johnson colouring used by the construction (of the dual parameters
    /// in the dual regime).
    pub fn johnson(&self) -> Option<&JohnsonColouring> {
        self.effective().johnson.as_ref()
    }

    pub fn code(&self) -> Option<&GabidulinCode> {
        self.effective().code.as_ref()
    }

    /// Johnson class of an identifying vector of the effective graph.
    pub fn class_of(&self, u: &BinaryVector) -> Option<u32> {
        self.johnson().and_then(|j| j.colour_of(u))
    }

    fn check_vertex(&self, s: &Subspace) -> Result<(), ColourError> {
        if s.field() != self.params.field()
            || s.ambient_dim() != self.params.n
            || s.dim() != self.params.m
        {
            return Err(ColourError::Dimension(format!(
                "expected a {}-space of F_{}^{}, got a {}-space of {}^{}",
                self.params.m,
                self.params.q,
                self.params.n,
                s.dim(),
                s.field(),
                s.ambient_dim()
            )));
        }
        Ok(())
    }

    pub fn place(&self, s: &Subspace) -> Result<Placement, ColourError> {
        self.check_vertex(s)?;
        match self.regime {
            Regime::Complete => Ok(Placement::Index(self.grassmannian.index_of(s)?)),
            Regime::Dual => self.inner.as_ref().unwrap().place(&grassmann::dualize(s)),
            Regime::Direct => {
                let (idvec, a) = rankmetric::unlift(s);
                let class = self
                    .class_of(&idvec)
                    .expect("identifying vectors have weight m");
                let coset = self.code.as_ref().unwrap().coset_index(&a)?;
                Ok(Placement::Coset {
                    idvec,
                    class,
                    coset,
                })
            }
        }
    }

    fn colour_of_placement(&self, p: &Placement) -> u64 {
        match p {
            Placement::Index(i) => *i,
            Placement::Coset { class, coset, .. } => {
                *class as u64 * self.code().unwrap().coset_count() + coset
            }
        }
    }

    pub fn colour_subspace(&self, s: &Subspace) -> Result<u64, ColourError> {
        Ok(self.colour_of_placement(&self.place(s)?))
    }
}

/// Integers travel as decimal strings.
mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::{fmt::Display, str::FromStr};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!(
                "expected a decimal integer string, got {s:?}"
            )));
        }
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    #[serde(with = "decimal")]
    pub q: u64,
    #[serde(with = "decimal")]
    pub n: usize,
    #[serde(with = "decimal")]
    pub m: usize,
    #[serde(with = "decimal")]
    pub t: usize,
}

impl From<&GrassmannParams> for ParamsRecord {
    fn from(p: &GrassmannParams) -> Self {
        ParamsRecord {
            q: p.q,
            n: p.n,
            m: p.m,
            t: p.t,
        }
    }
}

impl ParamsRecord {
    pub fn to_params(&self) -> Result<GrassmannParams, ColourError> {
        Ok(GrassmannParams::new(self.q, self.n, self.m, self.t)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JohnsonRecord {
    pub method: String,
    #[serde(with = "decimal")]
    pub palette: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    #[serde(with = "decimal")]
    pub q: u64,
    #[serde(with = "decimal")]
    pub m: usize,
    #[serde(with = "decimal")]
    pub h: usize,
    #[serde(with = "decimal")]
    pub d: usize,
    /// `None` when the code was too large for an exhaustive check.
    pub distance_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourEntry {
    pub vertex: String,
    #[serde(with = "decimal")]
    pub colour: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(with = "decimal")]
    pub vertices: BigUint,
    /// Clique bound, or the vertex count when the graph is complete.
    #[serde(with = "decimal")]
    pub lower: BigUint,
    #[serde(with = "decimal")]
    pub theorem_upper: BigUint,
    /// Degree plus one.
    #[serde(with = "decimal")]
    pub trivial_upper: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedRecord {
    pub proper: bool,
    #[serde(with = "decimal")]
    pub pairs_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetFamilies {
    #[serde(with = "decimal")]
    pub nonempty: u64,
    #[serde(with = "decimal")]
    pub min_size: u64,
    #[serde(with = "decimal")]
    pub max_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub johnson_method: Option<String>,
    /// How the Bose-Chowla set was obtained, for the Graham-Sloane method.
    pub bose_chowla: Option<String>,
    /// Parameters the construction actually ran on, in the dual regime.
    pub dual_params: Option<ParamsRecord>,
    pub coset_families: Option<CosetFamilies>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourCertificate {
    pub params: ParamsRecord,
    pub regime: Regime,
    pub johnson: Option<JohnsonRecord>,
    pub code: Option<CodeRecord>,
    pub colours: Vec<ColourEntry>,
    #[serde(with = "decimal")]
    pub palette: u64,
    pub bounds: BoundsReport,
    /// `None` when verification was skipped.
    pub verified: Option<VerifiedRecord>,
    pub provenance: Provenance,
}

impl ColourCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, ColourError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColourOptions {
    pub cap: u64,
    /// `None` verifies when the vertex count is at most [`AUTO_VERIFY_LIMIT`].
    pub verify: Option<bool>,
}

impl Default for ColourOptions {
    fn default() -> Self {
        ColourOptions {
            cap: DEFAULT_VERTEX_CAP,
            verify: None,
        }
    }
}

pub fn bounds_report(ctx: &ColourContext) -> BoundsReport {
    let p = &ctx.params;
    let (q, n, m, t) = (p.q, p.n as u64, p.m as u64, p.t as u64);
    let vertices = p.vertex_count();
    let trivial_upper = grassmann::degree_formula(p) + BigUint::one();
    let (lower, theorem_upper) = match ctx.regime {
        Regime::Complete => (vertices.clone(), vertices.clone()),
        _ => {
            let lower = matq::gaussian_binomial_or_zero(n - t, m - t, q)
                .max(matq::gaussian_binomial_or_zero(2 * m - t, m - t, q));
            let e = ctx.effective();
            let (m2, t2) = (e.params.m as u64, e.params.t as u64);
            let palette = e.johnson.as_ref().unwrap().palette();
            let upper =
                BigUint::from(palette) * BigUint::from(q).pow(((n - m2) * (m2 - t2)) as u32);
            (lower, upper)
        }
    };
    BoundsReport {
        vertices,
        lower,
        theorem_upper,
        trivial_upper,
    }
}

fn vertex_count_capped(params: &GrassmannParams, cap: u64) -> Result<u64, ColourError> {
    let v = params.vertex_count();
    match v.to_u64() {
        Some(x) if x <= cap => Ok(x),
        _ => Err(ColourError::TooLarge { vertices: v, cap }),
    }
}

/// Colour every vertex and seal the result in a certificate.
pub fn full_colouring(
    ctx: &ColourContext,
    options: ColourOptions,
) -> Result<ColourCertificate, ColourError> {
    let count = vertex_count_capped(&ctx.params, options.cap)?;
    let placed: Vec<(String, Placement)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = ctx
                .grassmannian
                .subspace_at(i)
                .expect("index below vertex count");
            ctx.place(&s).map(|p| (s.encode(), p))
        })
        .collect::<Result<_, _>>()?;

    let mut colours: Vec<ColourEntry> = placed
        .iter()
        .map(|(vertex, p)| ColourEntry {
            vertex: vertex.clone(),
            colour: ctx.colour_of_placement(p),
        })
        .collect();
    colours.sort_by(|a, b| a.vertex.cmp(&b.vertex));
    let palette = distinct_colours(&colours);

    let coset_families = (ctx.regime != Regime::Complete).then(|| {
        let mut sizes: HashMap<(u64, u64), u64> = HashMap::new();
        for (_, p) in &placed {
            if let Placement::Coset { idvec, coset, .. } = p {
                *sizes.entry((idvec.bits(), *coset)).or_default() += 1;
            }
        }
        CosetFamilies {
            nonempty: sizes.len() as u64,
            min_size: sizes.values().copied().min().unwrap_or(0),
            max_size: sizes.values().copied().max().unwrap_or(0),
        }
    });

    let johnson = ctx.johnson().map(|j| JohnsonRecord {
        method: j.method.to_string(),
        palette: j.palette() as u64,
    });
    let code = match ctx.code() {
        Some(c) => {
            let small = c.size() <= BigUint::from(DISTANCE_CHECK_LIMIT);
            let distance_verified = if small {
                Some(c.min_rank_distance()? == c.design_distance())
            } else {
                None
            };
            Some(CodeRecord {
                q: c.q(),
                m: c.m(),
                h: c.h(),
                d: c.design_distance(),
                distance_verified,
            })
        }
        None => None,
    };
    let provenance = Provenance {
        johnson_method: ctx.johnson().map(|j| j.method.to_string()),
        bose_chowla: ctx.johnson().and_then(|j| j.bose_chowla()).map(|b| {
            match b.origin {
                BoseChowlaOrigin::ProjectiveLine => "projective-line",
                BoseChowlaOrigin::Search => "search",
            }
            .to_string()
        }),
        dual_params: ctx.inner().map(|i| ParamsRecord::from(&i.params)),
        coset_families,
    };

    let mut cert = ColourCertificate {
        params: ParamsRecord::from(&ctx.params),
        regime: ctx.regime,
        johnson,
        code,
        colours,
        palette,
        bounds: bounds_report(ctx),
        verified: None,
        provenance,
    };
    if options.verify.unwrap_or(count <= AUTO_VERIFY_LIMIT) {
        let report = verify_properness(&cert, options.cap)?;
        cert.verified = Some(VerifiedRecord {
            proper: report.proper,
            pairs_checked: report.pairs_checked,
        });
    }
    Ok(cert)
}

fn distinct_colours(colours: &[ColourEntry]) -> u64 {
    let mut ids: Vec<u64> = colours.iter().map(|e| e.colour).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len() as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub first: String,
    pub second: String,
    pub colour: u64,
    pub intersection_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub proper: bool,
    pub vertices: u64,
    /// Unordered vertex pairs covered; pairs of different colours need no
    /// intersection computation.
    pub pairs_checked: u64,
    /// Pairs whose intersection was actually computed.
    pub same_colour_pairs: u64,
    /// First violation in canonical vertex order.
    pub counterexample: Option<Counterexample>,
}

/// Check that the certificate colours each vertex exactly once and that no
/// two equally coloured vertices meet in dimension `t` or more.
pub fn verify_properness(
    cert: &ColourCertificate,
    cap: u64,
) -> Result<VerificationReport, ColourError> {
    let params = cert.params.to_params()?;
    let count = vertex_count_capped(&params, cap)?;
    let g = Grassmannian::new(params.field(), params.n, params.m)?;

    let mut by_key: HashMap<&str, u64> = HashMap::with_capacity(cert.colours.len());
    for e in &cert.colours {
        if by_key.insert(&e.vertex, e.colour).is_some() {
            return Err(ColourError::Coverage(format!(
                "vertex {} listed twice",
                e.vertex
            )));
        }
    }
    let vertices: Vec<Subspace> = (0..count)
        .into_par_iter()
        .map(|i| g.subspace_at(i).unwrap())
        .collect();
    let mut colour = Vec::with_capacity(vertices.len());
    for s in &vertices {
        let key = s.encode();
        match by_key.get(key.as_str()) {
            Some(&c) => colour.push(c),
            None => return Err(ColourError::Coverage(format!("missing vertex {key}"))),
        }
    }
    if cert.colours.len() as u64 != count {
        let extra = cert
            .colours
            .iter()
            .find(|e| {
                Subspace::parse(&e.vertex)
                    .ok()
                    .and_then(|s| g.index_of(&s).ok())
                    .is_none()
            })
            .map(|e| e.vertex.clone())
            .unwrap_or_default();
        return Err(ColourError::Coverage(format!(
            "{} entries for {count} vertices; unexpected vertex {extra}",
            cert.colours.len()
        )));
    }
    let palette = distinct_colours(&cert.colours);
    if palette != cert.palette {
        return Err(ColourError::Inconsistent(format!(
            "palette recorded as {} but {palette} colours are used",
            cert.palette
        )));
    }

    let mut classes: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &c) in colour.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let mut classes: Vec<(u64, Vec<usize>)> = classes.into_iter().collect();
    classes.sort_unstable_by_key(|(c, _)| *c);
    let same_colour_pairs: u64 = classes
        .iter()
        .map(|(_, v)| (v.len() * v.len().saturating_sub(1) / 2) as u64)
        .sum();

    let t = params.t;
    let worst = classes
        .par_iter()
        .filter_map(|(c, members)| {
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    let dim = vertices[i]
                        .intersection_dim(&vertices[j])
                        .expect("same ambient space");
                    if dim >= t {
                        return Some(((i, j), *c, dim));
                    }
                }
            }
            None
        })
        .min_by_key(|(pair, _, _)| *pair);
    let counterexample = worst.map(|((i, j), colour, intersection_dim)| Counterexample {
        first: vertices[i].encode(),
        second: vertices[j].encode(),
        colour,
        intersection_dim,
    });
    Ok(VerificationReport {
        proper: counterexample.is_none(),
        vertices: count,
        pairs_checked: count * count.saturating_sub(1) / 2,
        same_colour_pairs,
        counterexample,
    })
}
