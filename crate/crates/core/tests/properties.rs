use proptest::prelude::*;

use qgrass::grassmann::{self, BinaryVector, Grassmannian, Subspace};
use qgrass::rankmetric::{self, GabidulinCode};
use qgrass::{matq, FieldSpec, MatrixFq};

fn field_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27])
}

fn matrix(q: u64, rows: usize, cols: usize) -> impl Strategy<Value = MatrixFq> {
    prop::collection::vec(0..q as u32, rows * cols).prop_map(move |data| {
        let f = FieldSpec::with_order(q).unwrap();
        MatrixFq::from_vec(&f, rows, cols, data).unwrap()
    })
}

fn weight_vector(n: usize, m: usize) -> impl Strategy<Value = BinaryVector> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |idx| BinaryVector::from_ones(n, &idx[..m]))
}

proptest! {
    #[test]
    fn field_operations_are_consistent(q in field_order(), a in 0u32..27, b in 0u32..27, e in -30i64..30) {
        let f = FieldSpec::with_order(q).unwrap();
        let (a, b) = (a % f.order(), b % f.order());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            let x = f.pow(a, e).unwrap();
            prop_assert_eq!(f.mul(x, f.pow(a, -e).unwrap()), 1);
            let g = f.primitive_element().code();
            let l = f.discrete_log(g, a).unwrap();
            prop_assert_eq!(f.pow(g, l as i64), Some(a));
        }
    }

    #[test]
    fn encoding_round_trips(
        (q, rows) in field_order().prop_flat_map(|q| (Just(q), (1usize..4).prop_flat_map(move |r| matrix(q, r, 5))))
    ) {
        let s = Subspace::from_generators(&rows);
        prop_assume!(s.dim() > 0);
        let back = Subspace::parse(&s.encode()).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.encode(), s.encode());
        prop_assert_eq!(q, s.field().order() as u64);
    }

    #[test]
    fn duality_preserves_meets(
        (a, b) in (2usize..4).prop_flat_map(|k| (matrix(3, k, 6), matrix(3, k, 6)))
    ) {
        let (s, t) = (Subspace::from_generators(&a), Subspace::from_generators(&b));
        prop_assume!(s.dim() == t.dim() && s.dim() > 0);
        let (ds, dt) = (grassmann::dualize(&s), grassmann::dualize(&t));
        prop_assert_eq!(ds.dim(), 6 - s.dim());
        prop_assert_eq!(grassmann::dualize(&ds), s.clone());
        let i = s.intersection_dim(&t).unwrap();
        prop_assert_eq!(ds.intersection_dim(&dt).unwrap() + 2 * s.dim(), i + 6);
    }

    #[test]
    fn lifting_preserves_rank_distance(
        (u, a, b) in (prop::sample::select(vec![2u64, 3, 4]), 3usize..7)
            .prop_flat_map(|(q, n)| (Just(q), Just(n), 1..n))
            .prop_flat_map(|(q, n, m)| (weight_vector(n, m), matrix(q, m, n - m), matrix(q, m, n - m)))
    ) {
        let m = u.weight();
        let la = rankmetric::lift(&u, &a).unwrap();
        let lb = rankmetric::lift(&u, &b).unwrap();
        prop_assert_eq!(matq::intersection_dim(&la, &lb).unwrap(), m - a.sub(&b).unwrap().rank());
    }

    #[test]
    fn ranking_and_unlifting_round_trip(index in 0u64..11011) {
        let f = FieldSpec::with_order(3).unwrap();
        let g = Grassmannian::new(&f, 6, 2).unwrap();
        let s = g.subspace_at(index).unwrap();
        prop_assert_eq!(g.index_of(&s).unwrap(), index);
        let (u, a) = rankmetric::unlift(&s);
        prop_assert_eq!(&u, &s.identifying_vector());
        prop_assert_eq!(&rankmetric::lift(&u, &a).unwrap(), s.basis());
    }

    #[test]
    fn cosets_absorb_codewords(a in matrix(2, 3, 3), pick in 0u64..64) {
        let code = GabidulinCode::build(2, 3, 3, 2).unwrap();
        let words: Vec<MatrixFq> = code.codewords().collect();
        let c = &words[(pick % words.len() as u64) as usize];
        let i = code.coset_index(&a).unwrap();
        prop_assert_eq!(code.coset_index(&a.add(c).unwrap()).unwrap(), i);
        let rep = code.coset_representative(i).unwrap();
        prop_assert!(code.contains(&a.sub(&rep).unwrap()).unwrap());
    }

    #[test]
    fn hamming_schur_identity(
        (u, v) in (2usize..64)
            .prop_flat_map(|n| (Just(n), 1..n))
            .prop_flat_map(|(n, m)| (weight_vector(n, m), weight_vector(n, m)))
    ) {
        let m = u.weight();
        prop_assert_eq!(u.hamming_distance(&v), 2 * (m - u.schur(&v).weight()));
    }
}
