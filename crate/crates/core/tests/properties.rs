use proptest::prelude::*;

use spinmcg::calculus::{
    box_minus, box_plus, factor_square_transvection, has_block_shape, is_delta_vector, is_negative_x_unit,
    lambda_reduce, lambda_reduce_to_base, reduce_blocks, reduce_to_delta, square_op, z2_transvection, LambdaVec,
};
use spinmcg::rewriter::{check_rewrite, rewrite_square_conjugate, tokens_are_pure};
use spinmcg::schreier::{coset_representative, COSET_WORDS};
use spinmcg::{
    intersection_int, parse_word, square_transvection, transvection_mod2, CurveClassTable, GenWord, Genus, IntMatrix,
    IntVec, Letter, Z2Vec,
};

fn genus(g: usize) -> Genus {
    Genus::new(g).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(max_genus: usize) -> impl Strategy<Value = IntVec> {
    (1..=max_genus)
        .prop_flat_map(|g| prop::collection::vec(-40i64..=40, 2 * g))
        .prop_filter("primitive", |c| c.iter().fold(0, |acc, &x| gcd(acc, x)) == 1)
        .prop_map(|c| IntVec::from_i64s(genus(c.len() / 2), &c).unwrap())
}

fn word(g: usize, max_len: usize) -> impl Strategy<Value = GenWord> {
    prop::collection::vec((1..=2 * g + 1, any::<bool>()), 0..=max_len).prop_map(|ls| {
        GenWord::new(ls.into_iter().map(|(i, inv)| if inv { Letter::c_inv(i) } else { Letter::c(i) }).collect())
    })
}

proptest! {
    #[test]
    fn box_operations_undo_each_other(a in primitive(4), seed in any::<u64>()) {
        let g = a.genus();
        let b_coords: Vec<i64> = (0..g.dim()).map(|k| ((seed >> (3 * k)) % 7) as i64 - 3).collect();
        let b = IntVec::from_i64s(g, &b_coords).unwrap();
        prop_assert_eq!(box_minus(&box_plus(&a, &b).unwrap(), &b).unwrap(), a.clone());
        prop_assert_eq!(box_plus(&box_minus(&a, &b).unwrap(), &b).unwrap(), a.clone());
    }

    #[test]
    fn box_plus_conjugates_square_transvections(a in primitive(4), seed in any::<u64>()) {
        let g = a.genus();
        let b_coords: Vec<i64> = (0..g.dim()).map(|k| ((seed >> (2 * k)) % 3) as i64).collect();
        let b = IntVec::from_i64s(g, &b_coords).unwrap();
        prop_assume!(b.is_primitive());
        let lhs: IntMatrix = square_transvection(&box_plus(&a, &b).unwrap()).unwrap();
        let tb2 = square_transvection(&b).unwrap();
        let mut tb_inv2 = IntMatrix::identity(g);
        tb_inv2.right_mul_transvection_power(&b, &-2).unwrap();
        let rhs = tb_inv2.mul(&square_transvection(&a).unwrap()).unwrap().mul(&tb2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn block_reduction_postconditions(a in primitive(4)) {
        let cert = reduce_blocks(&a).unwrap();
        prop_assert!(cert.verify());
        prop_assert!(has_block_shape(&cert.output));
        for mv in &cert.moves {
            let ones = mv.operand.coords().iter().filter(|&&c| c == 1).count();
            prop_assert_eq!(ones, 1);
        }
    }

    #[test]
    fn delta_reduction_postconditions(a in primitive(4)) {
        let cert = reduce_to_delta(&a).unwrap();
        prop_assert!(cert.verify());
        prop_assert!(is_delta_vector(&cert.output) || is_negative_x_unit(&cert.output));
        prop_assert!(cert.output.is_primitive());
    }

    #[test]
    fn square_transvection_factorization(a in primitive(4)) {
        let f = factor_square_transvection(&a).unwrap();
        prop_assert!(f.verify().unwrap());
    }

    #[test]
    fn rewriting_is_sound(g in 2usize..=4, seed in any::<u64>(), w in word(4, 12)) {
        let gen = genus(g);
        // fold letters into range for the drawn genus
        let letters: Vec<Letter> = w.letters().iter().map(|l| {
            let i = (l.index - 1) % (2 * g + 1) + 1;
            if l.inverse { Letter::c_inv(i) } else { Letter::c(i) }
        }).collect();
        let w = GenWord::new(letters);
        let i = (seed as usize) % (2 * g + 1) + 1;
        let cert = rewrite_square_conjugate(&w, i, gen).unwrap();
        prop_assert!(tokens_are_pure(&cert.tokens, gen));
        prop_assert!(check_rewrite(&cert, gen));
    }

    #[test]
    fn far_letters_leave_a_single_square(i in 1usize..=9, w in word(4, 10)) {
        let letters: Vec<Letter> = w.letters().iter().copied().filter(|l| l.index.abs_diff(i) >= 2).collect();
        let w = GenWord::new(letters);
        let cert = rewrite_square_conjugate(&w, i, genus(4)).unwrap();
        prop_assert_eq!(cert.token_string(), format!("D{i}"));
    }

    #[test]
    fn words_evaluate_to_symplectic_matrices(g in 1usize..=4, w in word(4, 16)) {
        let gen = genus(g);
        let letters: Vec<Letter> = w.letters().iter().map(|l| Letter { index: (l.index - 1) % (2 * g + 1) + 1, ..*l }).collect();
        let w = GenWord::new(letters);
        let t = CurveClassTable::canonical(gen);
        let m: IntMatrix = t.eval_int(&w).unwrap();
        prop_assert!(m.is_symplectic().unwrap());
        prop_assert_eq!(m.reduce_mod2(), t.eval_mod2(&w).unwrap());
    }

    #[test]
    fn inverse_word_inverts(w in word(2, 12)) {
        let t = CurveClassTable::canonical(genus(2));
        let m: IntMatrix = t.eval_int(&w.concat(&w.inverse())).unwrap();
        prop_assert!(m.is_identity());
    }

    #[test]
    fn lambda_reductions_replay(g in 1usize..=6, bits in any::<u64>()) {
        let gen = genus(g);
        let coords: Vec<u8> = (0..2 * g).map(|k| ((bits >> k) & 1) as u8).collect();
        let v = Z2Vec::from_coords(gen, &coords).unwrap();
        if let Ok(z) = LambdaVec::new(v) {
            prop_assert!(lambda_reduce(&z).unwrap().verify());
            let r = lambda_reduce_to_base(&z).unwrap();
            prop_assert!(r.verify());
            let base = r.output.vector();
            prop_assert!(base == Z2Vec::from_blocks(gen, &coords_of_base(g, 1)).unwrap()
                || (g >= 2 && base == Z2Vec::from_blocks(gen, &coords_of_base(g, 2)).unwrap()));
        }
    }

    #[test]
    fn coset_representatives_close_up(w in word(2, 10)) {
        let s = coset_representative(&w).unwrap();
        prop_assert!(COSET_WORDS.iter().any(|c| parse_word(c, genus(2)).unwrap() == s));
        let h = w.concat(&s.inverse());
        prop_assert!(CurveClassTable::canonical(genus(2)).spin_check(&h).unwrap());
    }
}

// x1+y1 (kind 1) or x1+y1+x2 (kind 2) as blocks
fn coords_of_base(g: usize, kind: usize) -> Vec<(u8, u8)> {
    let mut b = vec![(0u8, 0u8); g];
    b[0] = (1, 1);
    if kind == 2 {
        b[1] = (1, 0);
    }
    b
}

#[test]
fn square_operation_laws_exhaustive() {
    for g in 1..=3 {
        let all: Vec<LambdaVec> = LambdaVec::all(genus(g)).collect();
        for z1 in &all {
            for z2 in &all {
                let z = square_op(z1, z2).unwrap();
                assert_eq!(square_op(&z, z2).unwrap(), *z1);
                let conj = z2_transvection(z2).mul(&z2_transvection(z1)).unwrap().mul(&z2_transvection(z2)).unwrap();
                assert_eq!(z2_transvection(&z), conj);
            }
        }
    }
}

#[test]
fn box_laws_exhaustive_on_small_vectors() {
    for g in 1..=2 {
        let gen = genus(g);
        let n = gen.dim() as u32;
        let vectors: Vec<IntVec> = (0..3i64.pow(n))
            .map(|mut code| {
                let c: Vec<i64> = (0..n)
                    .map(|_| {
                        let d = code % 3 - 1;
                        code /= 3;
                        d
                    })
                    .collect();
                IntVec::from_i64s(gen, &c).unwrap()
            })
            .collect();
        for a in &vectors {
            for b in &vectors {
                assert_eq!(box_minus(&box_plus(a, b).unwrap(), b).unwrap(), *a);
                let k = intersection_int(a, b).unwrap();
                let expected = a.add_scaled(&(2 * k), b).unwrap();
                assert_eq!(box_plus(a, b).unwrap(), expected);
            }
        }
    }
}

#[test]
fn transvection_mod2_is_an_involution() {
    for g in 1..=3 {
        for v in Z2Vec::all(genus(g)).filter(|v| !v.is_zero()) {
            let t = transvection_mod2(&v).unwrap();
            assert!(t.mul(&t).unwrap().is_identity());
        }
    }
}
