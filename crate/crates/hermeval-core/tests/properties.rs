use hermeval_core::exactalg::{rat, vandermonde_solve, Cyclo, Rat};
use hermeval_core::graphcore::{parse_graph, write_graph};
use hermeval_core::quadsum::{eval_q, eval_q_bruteforce, QuadraticForm};
use hermeval_core::random::{random_connected_digraph, random_instance, random_pinning, seeded};
use hermeval_core::{classify, HermitianInstance};
use proptest::prelude::*;

fn cyclo(l: u64, coeffs: &[(i64, i64)]) -> Cyclo {
    coeffs
        .iter()
        .enumerate()
        .fold(Cyclo::zero(l), |acc, (k, &(n, d))| {
            acc.add(&Cyclo::scaled_root(l, &rat(n, d), k as i64))
        })
}

fn arb_cyclo() -> impl Strategy<Value = (u64, Vec<(i64, i64)>)> {
    (1u64..=12).prop_flat_map(|l| {
        (
            Just(l),
            prop::collection::vec((-5i64..=5, 1i64..=4), l as usize),
        )
    })
}

fn form(q: u64, n: usize, coeffs: &[u64]) -> QuadraticForm {
    let mut f = QuadraticForm::new(q, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            f.add_quad(i, j, coeffs[k] as i64);
            k += 1;
        }
        f.add_lin(i, coeffs[k] as i64);
        k += 1;
    }
    f
}

proptest! {
    #[test]
    fn norm_is_real((l, c) in arb_cyclo(), k in 0i64..24) {
        let a = cyclo(l, &c);
        let n = a.mul(&a.conj());
        prop_assert_eq!(n.conj(), n);
        let z = Cyclo::root(l, k);
        prop_assert!(z.mul(&z.conj()).is_one());
    }

    #[test]
    fn field_laws((l, c1) in arb_cyclo(), seed in any::<u64>()) {
        let a = cyclo(l, &c1);
        let mut rng = seeded(seed);
        let other: Vec<(i64, i64)> = (0..l).map(|_| (rand::Rng::gen_range(&mut rng, -4..=4), rand::Rng::gen_range(&mut rng, 1..=3))).collect();
        let b = cyclo(l, &other);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&a)), a.mul(&b).add(&a.mul(&a)));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_preserves_equality((l, c) in arb_cyclo(), m in 1u64..=4) {
        let a = cyclo(l, &c);
        let b = a.add(&Cyclo::one(l)).sub(&Cyclo::one(l));
        let (ea, eb) = (a.embed(l * m).unwrap(), b.embed(l * m).unwrap());
        prop_assert_eq!(a == b, ea == eb);
        prop_assert!(ea.eq_value(&a));
        prop_assert_eq!(ea.minimal(), a.minimal());
    }

    #[test]
    fn vandermonde_round_trip(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let l = 6;
        let mut points: Vec<Cyclo> = Vec::new();
        while points.len() < n {
            let r = rat(rand::Rng::gen_range(&mut rng, 1..=5), rand::Rng::gen_range(&mut rng, 1..=3));
            let p = Cyclo::scaled_root(l, &r, rand::Rng::gen_range(&mut rng, 0..6));
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let coeffs: Vec<Cyclo> = (0..n)
            .map(|_| Cyclo::from_rat(l, &rat(rand::Rng::gen_range(&mut rng, -9..=9), rand::Rng::gen_range(&mut rng, 1..=4))))
            .collect();
        let values: Vec<Cyclo> = (1..=n as u64)
            .map(|j| points.iter().zip(&coeffs).fold(Cyclo::zero(l), |s, (x, c)| s.add(&c.mul(&x.pow(j)))))
            .collect();
        prop_assert_eq!(vandermonde_solve(&points, &values).unwrap(), coeffs);
    }

    #[test]
    fn grades_sum_to_zero(n in 1usize..=7, slots in 0usize..=10, seed in any::<u64>(), p in 0u32..3, omega in 1u32..=4) {
        let g = random_connected_digraph(&mut seeded(seed), n, slots, 3);
        prop_assert_eq!(g.grades().iter().sum::<i64>(), 0);
        let t = g.thicken(p * omega + 1);
        for (a, b) in g.grades().iter().zip(t.grades()) {
            prop_assert_eq!((a - b).rem_euclid(omega as i64), 0);
        }
    }

    #[test]
    fn graph_text_round_trip(n in 1usize..=6, slots in 0usize..=8, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let g = random_connected_digraph(&mut rng, n, slots, 2);
        let pins = random_pinning(&mut rng, &g, 3, 2);
        let text = write_graph(&g, &pins);
        let (g2, p2) = parse_graph(&text).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(&p2, &pins);
        prop_assert_eq!(write_graph(&g2, &p2), text);
    }

    #[test]
    fn instance_text_round_trip(m in 1usize..=4, omega in 1u64..=6, seed in any::<u64>()) {
        let inst = random_instance(&mut seeded(seed), m, omega);
        let text = inst.to_text();
        let back = HermitianInstance::parse(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn eval_q_matches_brute_force(qi in 0usize..6, n in 0usize..=3, coeffs in prop::collection::vec(0u64..9, 10), c0 in 0u64..9) {
        let q = [2u64, 3, 4, 5, 8, 9][qi];
        let mut f = form(q, n, &coeffs.iter().map(|c| c % q).collect::<Vec<_>>());
        f.add_const(c0 as i64);
        prop_assert_eq!(eval_q(&f).unwrap(), eval_q_bruteforce(&f));
    }

    #[test]
    fn eval_q_symmetries(qi in 0usize..3, coeffs in prop::collection::vec(0u64..7, 20), seed in any::<u64>()) {
        let q = [3u64, 5, 7][qi];
        let n = 3;
        let f = form(q, n, &coeffs);
        let g = form(q, 2, &coeffs[10..]);
        let z = eval_q(&f).unwrap();
        prop_assert_eq!(eval_q(&f.direct_sum(&g)).unwrap(), z.mul(&eval_q(&g).unwrap()));
        prop_assert_eq!(eval_q(&f.permute_vars(&[2, 0, 1])).unwrap(), z.clone());
        // X = M·Y + t with M unit lower-triangular (invertible) times a unit diagonal
        let mut rng = seeded(seed);
        let mut mm = vec![vec![0u64; n]; n];
        for i in 0..n {
            mm[i][i] = rand::Rng::gen_range(&mut rng, 1..q);
            for j in 0..i {
                mm[i][j] = rand::Rng::gen_range(&mut rng, 0..q);
            }
        }
        let t: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..q)).collect();
        let mut h = QuadraticForm::new(q, n);
        h.add_const(f.constant() as i64);
        for i in 0..n {
            let li = f.lin(i) as i64;
            h.add_const(li * t[i] as i64);
            for k in 0..n {
                h.add_lin(k, li * mm[i][k] as i64);
            }
            for j in i..n {
                let c = f.quad(i, j) as i64;
                for k in 0..n {
                    for l in 0..n {
                        h.add_quad(k, l, c * (mm[i][k] * mm[j][l]) as i64);
                    }
                    h.add_lin(k, c * (t[j] * mm[i][k] + t[i] * mm[j][k]) as i64);
                }
                h.add_const(c * (t[i] * t[j]) as i64);
            }
        }
        prop_assert_eq!(eval_q(&h).unwrap(), z);
    }

    #[test]
    fn classify_invariances(m in 1usize..=4, omega in 1u64..=4, seed in any::<u64>(), num in 1i64..=5, den in 1i64..=5) {
        let mut rng = seeded(seed);
        let inst = random_instance(&mut rng, m, omega);
        let d = classify(&inst).unwrap();
        let scaled = classify(&inst.scale_weights(&rat(num, den))).unwrap();
        prop_assert_eq!(d.is_polytime(), scaled.is_polytime());
        let mut perm: Vec<usize> = (0..m).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let pd = classify(&inst.permute(&perm)).unwrap();
        prop_assert_eq!(d.is_polytime(), pd.is_polytime());
        if let (Some(w), Some(pw)) = (d.witness(), pd.witness()) {
            prop_assert_eq!(w.tag, pw.tag);
        }
    }
}

#[test]
fn scaled_weights_scale_value() {
    let mut rng = seeded(4);
    for _ in 0..20 {
        let inst = random_instance(&mut rng, 3, 2);
        let g = random_connected_digraph(&mut rng, 4, 5, 2);
        let s: Rat = rat(3, 2);
        let a = hermeval_core::oracle::eval_bruteforce(&inst, &Default::default(), &g).unwrap();
        let b = hermeval_core::oracle::eval_bruteforce(
            &inst.scale_weights(&s),
            &Default::default(),
            &g,
        )
        .unwrap();
        let f = num_traits::pow::pow(s.clone(), g.vertex_count());
        assert_eq!(a.scale(&f), b);
    }
}
