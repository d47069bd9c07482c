//! Seeded property checks over every layer, for `qgrass selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colouring::{self, ColourOptions};
use crate::ff::FieldSpec;
use crate::grassmann::{self, BinaryVector, GrassmannParams, Grassmannian, Subspace};
use crate::johnson::{self, JohnsonMethod};
use crate::matq::{self, MatrixFq};
use crate::oracle;
use crate::rankmetric::{self, GabidulinCode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Suite = fn(&mut ChaCha8Rng, usize) -> Result<String, String>;

const SUITES: &[(&str, Suite)] = &[
    ("field-axioms", field_axioms),
    ("rank-and-intersection", rank_and_intersection),
    ("gaussian-binomial-counts", gaussian_counts),
    ("hamming-schur-identity", hamming_schur),
    ("degree-formula", degree_formula),
    ("lifting-lemma", lifting_lemma),
    ("mrd-distance", mrd_distance),
    ("duality", duality),
    ("johnson-colourings", johnson_colourings),
    ("grassmann-colourings", grassmann_colourings),
    ("exact-chromatic", exact_chromatic),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Run every suite with `trials` random cases each.
pub fn run(seed: u64, trials: usize) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (passed, detail) = match suite(&mut rng, trials) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            SuiteResult {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, f: &FieldSpec, rows: usize, cols: usize) -> MatrixFq {
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(0..f.order()))
        .collect();
    MatrixFq::from_vec(f, rows, cols, data).unwrap()
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize, m: usize) -> BinaryVector {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    BinaryVector::from_ones(n, &idx[..m])
}

fn field_axioms(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    for q in [2u64, 3, 4, 8, 9, 25, 27, 49, 256] {
        let f = FieldSpec::with_order(q).map_err(|e| e.to_string())?;
        for _ in 0..trials {
            let [a, b, c] = [0; 3].map(|_| rng.gen_range(0..f.order()));
            ensure(
                f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                || format!("distributivity fails in GF({q}) at {a},{b},{c}"),
            )?;
            ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || {
                format!("associativity fails in GF({q})")
            })?;
            if a != 0 {
                ensure(f.mul(a, f.inv(a).unwrap()) == 1, || {
                    format!("inverse of {a} in GF({q})")
                })?;
                ensure(f.pow(a, q as i64 - 1) == Some(1), || {
                    format!("a^(q-1) != 1 for {a} in GF({q})")
                })?;
            }
        }
    }
    Ok(format!("9 fields x {trials} triples"))
}

fn rank_and_intersection(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    for q in [2u64, 3, 4] {
        let f = FieldSpec::with_order(q).unwrap();
        for _ in 0..trials {
            let n = rng.gen_range(2..=6);
            let (ru, rw) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let u = random_matrix(rng, &f, ru, n);
            let w = random_matrix(rng, &f, rw, n);
            let (r, _) = u.rref();
            ensure(r.rref().0 == r && r.rank() == u.rank(), || {
                "RREF is not idempotent".into()
            })?;
            let both = u.vstack(&w).unwrap();
            let i = matq::intersection_dim(&u, &w).unwrap();
            ensure(
                i <= u.rank().min(w.rank()) && u.rank() + w.rank() - i == both.rank(),
                || "intersection formula inconsistent".into(),
            )?;
            let perp = matq::orthogonal_complement(&r.nonzero_rows()).unwrap();
            ensure(perp.rows() + u.rank() == n, || {
                "complement has the wrong dimension".into()
            })?;
            ensure(u.mul(&perp.transpose()).unwrap().is_zero(), || {
                "complement is not orthogonal".into()
            })?;
        }
    }
    Ok(format!("3 fields x {trials} pairs"))
}

fn gaussian_counts(_: &mut ChaCha8Rng, _: usize) -> Result<String, String> {
    for (q, n, m) in [
        (2u64, 4usize, 2usize),
        (2, 5, 2),
        (3, 4, 2),
        (4, 3, 1),
        (2, 6, 3),
    ] {
        let field = FieldSpec::with_order(q).unwrap();
        let count = Grassmannian::new(&field, n, m).unwrap().iter().count();
        let formula = matq::gaussian_binomial(n as u64, m as u64, q).unwrap();
        ensure(formula == count.into(), || {
            format!("[{n},{m}]_{q}: {formula} vs {count}")
        })?;
    }
    Ok("5 enumerations".into())
}

fn hamming_schur(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    for _ in 0..trials {
        let n = rng.gen_range(2..=40);
        let m = rng.gen_range(1..n);
        let (u, v) = (random_weight(rng, n, m), random_weight(rng, n, m));
        ensure(
            u.hamming_distance(&v) == 2 * (m - u.schur(&v).weight()),
            || format!("{u} vs {v}"),
        )?;
    }
    Ok(format!("{trials} pairs"))
}

fn degree_formula(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    for (q, n, m, t) in [
        (2u64, 4usize, 2usize, 1usize),
        (2, 5, 2, 1),
        (3, 4, 2, 1),
        (2, 5, 3, 2),
    ] {
        let p = GrassmannParams::new(q, n, m, t).unwrap();
        let g = Grassmannian::new(p.field(), n, m).unwrap();
        let all: Vec<Subspace> = g.iter().collect();
        let expected = grassmann::degree_formula(&p);
        for _ in 0..trials.min(all.len()) {
            let s = all.choose(rng).unwrap();
            let deg = all
                .iter()
                .filter(|x| *x != s && s.intersection_dim(x).unwrap() >= t)
                .count();
            ensure(expected == deg.into(), || {
                format!("{p}: vertex {} has degree {deg}", s.encode())
            })?;
        }
    }
    Ok("4 graphs".into())
}

fn lifting_lemma(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    for q in [2u64, 3, 4] {
        let f = FieldSpec::with_order(q).unwrap();
        for _ in 0..trials {
            let n = rng.gen_range(3..=7);
            let m = rng.gen_range(1..n);
            let u = random_weight(rng, n, m);
            let a = random_matrix(rng, &f, m, n - m);
            let b = random_matrix(rng, &f, m, n - m);
            let la = Subspace::from_generators(&rankmetric::lift(&u, &a).unwrap());
            let lb = Subspace::from_generators(&rankmetric::lift(&u, &b).unwrap());
            let expected = m - a.sub(&b).unwrap().rank();
            ensure(la.intersection_dim(&lb).unwrap() == expected, || {
                format!("lift of {u} over GF({q})")
            })?;
        }
    }
    Ok(format!("3 fields x {trials} pairs"))
}

fn mrd_distance(_: &mut ChaCha8Rng, _: usize) -> Result<String, String> {
    let cases = [
        (2u64, 2usize, 2usize, 2usize),
        (2, 2, 3, 2),
        (3, 2, 2, 2),
        (2, 3, 3, 2),
        (2, 3, 3, 3),
        (4, 2, 2, 2),
    ];
    for (q, m, h, d) in cases {
        let code = GabidulinCode::build(q, m, h, d).map_err(|e| e.to_string())?;
        let dist = code.min_rank_distance().map_err(|e| e.to_string())?;
        let size = num_bigint::BigUint::from(q).pow((h * (m - d + 1)) as u32);
        ensure(dist == d && code.size() == size, || {
            format!("code ({q},{m},{h},{d})")
        })?;
    }
    Ok(format!("{} codes", cases.len()))
}

fn duality(rng: &mut ChaCha8Rng, trials: usize) -> Result<String, String> {
    let (n, m) = (5, 3);
    let p = GrassmannParams::new(2, n, m, 2).unwrap();
    let g = Grassmannian::new(p.field(), n, m).unwrap();
    let all: Vec<Subspace> = g.iter().collect();
    for _ in 0..trials {
        let (a, b) = (all.choose(rng).unwrap(), all.choose(rng).unwrap());
        let (da, db) = (grassmann::dualize(a), grassmann::dualize(b));
        ensure(grassmann::dualize(&da) == *a, || {
            "dualize is not an involution".into()
        })?;
        let i = a.intersection_dim(b).unwrap();
        ensure(da.intersection_dim(&db).unwrap() == i + n - 2 * m, || {
            "dual intersection mismatch".into()
        })?;
    }
    Ok(format!("{trials} pairs"))
}

fn johnson_colourings(_: &mut ChaCha8Rng, _: usize) -> Result<String, String> {
    let mut count = 0;
    for n in 3..=7 {
        for m in 2..n {
            for t in 1..m {
                for method in [JohnsonMethod::Greedy, JohnsonMethod::GrahamSloane] {
                    let c = johnson::colouring(n, m, t, method).map_err(|e| e.to_string())?;
                    ensure(c.is_proper(), || format!("{method} J({n},{m},{t})"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} colourings"))
}

fn grassmann_colourings(_: &mut ChaCha8Rng, _: usize) -> Result<String, String> {
    let cases = [
        (2u64, 4usize, 2usize, 1usize),
        (3, 4, 2, 1),
        (2, 5, 3, 2),
        (2, 5, 3, 1),
        (2, 5, 2, 1),
    ];
    for (q, n, m, t) in cases {
        let p = GrassmannParams::new(q, n, m, t).unwrap();
        for method in [JohnsonMethod::Greedy, JohnsonMethod::GrahamSloane] {
            let ctx = colouring::make_context(&p, method).map_err(|e| e.to_string())?;
            let options = ColourOptions {
                verify: Some(true),
                ..Default::default()
            };
            let cert = colouring::full_colouring(&ctx, options).map_err(|e| e.to_string())?;
            ensure(cert.verified.as_ref().is_some_and(|v| v.proper), || {
                format!("{p} with {method}")
            })?;
            ensure(
                num_bigint::BigUint::from(cert.palette) <= cert.bounds.theorem_upper,
                || format!("{p}: palette above theorem bound"),
            )?;
        }
    }
    Ok(format!("{} parameter sets x 2 methods", cases.len()))
}

fn exact_chromatic(_: &mut ChaCha8Rng, _: usize) -> Result<String, String> {
    let p = GrassmannParams::new(2, 4, 2, 1).unwrap();
    let g = oracle::build_graph(&p, oracle::DEFAULT_GRAPH_CAP).map_err(|e| e.to_string())?;
    let r = oracle::exact_chromatic(&g, oracle::DEFAULT_BUDGET);
    ensure(r.exact && r.upper == 7 && r.lower == 7, || {
        format!("got [{}, {}]", r.lower, r.upper)
    })?;
    Ok("chi(J_2(4,2,1)) = 7".into())
}
