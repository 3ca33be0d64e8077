use hermeval_core::oracle::eval_bruteforce;
use hermeval_core::random::{
    random_connected_digraph, random_instance, random_pinning, random_rank1, random_tractable,
    seeded,
};
use hermeval_core::{classify, eval_fast};

#[test]
fn tractable_instances_agree_with_oracle() {
    let mut rng = seeded(7);
    for trial in 0..300 {
        let omega = 1 + trial % 4;
        let inst = random_tractable(&mut rng, 4, omega as u64);
        let d = classify(&inst).unwrap();
        let plan = match d.plan() {
            Some(p) => p,
            None => panic!(
                "trial {trial}: {} classified hard: {}\n{}",
                omega,
                d.witness().unwrap(),
                inst.to_text()
            ),
        };
        for _ in 0..4 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..5));
            let g = random_connected_digraph(&mut rng, n, n + 2, 2);
            let pins = random_pinning(&mut rng, &g, inst.size(), 2);
            let fast = eval_fast(plan, &pins, &g).unwrap();
            let slow = eval_bruteforce(&inst, &pins, &g).unwrap();
            assert!(
                fast.eq_value(&slow),
                "trial {trial}\n{}\ng={g:?} pins={pins:?}\nfast={fast} slow={slow}",
                inst.to_text()
            );
        }
    }
}

#[test]
fn rank1_instances_agree_with_oracle() {
    let mut rng = seeded(11);
    for trial in 0..100 {
        let inst = random_rank1(&mut rng, 1 + trial % 4);
        let d = classify(&inst).unwrap();
        let plan = d.plan().expect("non-negative rank-1 is tractable");
        for _ in 0..3 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..5));
            let g = random_connected_digraph(&mut rng, n, n + 2, 2);
            let pins = random_pinning(&mut rng, &g, inst.size(), 2);
            let fast = eval_fast(plan, &pins, &g).unwrap();
            let slow = eval_bruteforce(&inst, &pins, &g).unwrap();
            assert!(
                fast.eq_value(&slow),
                "trial {trial}\n{}\n{g:?} {pins:?}",
                inst.to_text()
            );
        }
    }
}

#[test]
fn arbitrary_instances_classified_tractable_agree_with_oracle() {
    let mut rng = seeded(23);
    let mut tractable = 0;
    for trial in 0..2000 {
        let omega = 1 + (trial % 4) as u64;
        let m = 1 + trial % 3;
        let inst = random_instance(&mut rng, m, omega);
        let d = classify(&inst).unwrap();
        let Some(plan) = d.plan() else { continue };
        tractable += 1;
        for _ in 0..3 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
            let g = random_connected_digraph(&mut rng, n, n + 3, 2);
            let pins = random_pinning(&mut rng, &g, inst.size(), 2);
            let fast = eval_fast(plan, &pins, &g).unwrap();
            let slow = eval_bruteforce(&inst, &pins, &g).unwrap();
            assert!(
                fast.eq_value(&slow),
                "trial {trial}\n{}\n{g:?} {pins:?}",
                inst.to_text()
            );
        }
    }
    assert!(tractable > 200, "only {tractable} tractable samples");
}

#[test]
fn emitted_tiles_satisfy_weight_orthogonality() {
    use hermeval_core::{ComponentPlan, Cyclo};
    let mut rng = seeded(31);
    let mut seen = 0;
    for trial in 0..200 {
        let omega = 2 + 2 * (trial % 2) as u64;
        let inst = random_tractable(&mut rng, 4, omega);
        let d = classify(&inst).unwrap();
        for c in &d.plan().unwrap().components {
            let ComponentPlan::NonBipartite { tiles, .. } = c else {
                continue;
            };
            seen += 1;
            let (r, l) = (tiles.r(), 2 * omega);
            let h: Vec<Vec<Cyclo>> = tiles
                .h
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&p| Cyclo::root(l, (2 * p) as i64))
                        .collect()
                })
                .collect();
            for mu in 0..tiles.m() {
                let dm: Vec<Cyclo> = (0..r)
                    .map(|i| tiles.delta[0][mu].mul(&tiles.u.at(0)[i]))
                    .collect();
                let d0: Vec<Cyclo> = (0..r)
                    .map(|i| tiles.delta[0][0].mul(&tiles.u.at(0)[i]))
                    .collect();
                let tr = dm.iter().fold(Cyclo::zero(l), |s, x| s.add(x));
                for a in 0..r {
                    for b in 0..r {
                        let e = (0..r).fold(Cyclo::zero(l), |s, k| {
                            s.add(&h[a][k].mul(&dm[k]).mul(&h[b][k].conj()))
                        });
                        let want = if a == b { tr.clone() } else { Cyclo::zero(l) };
                        assert_eq!(e, want, "trial {trial}");
                    }
                }
                // D^⟨0;μ⟩ = d_μ·D^⟨0;1⟩
                let ratio = tiles.delta[0][mu].mul(&tiles.delta[0][0].inv().unwrap());
                for i in 0..r {
                    assert_eq!(dm[i], ratio.mul(&d0[i]));
                }
            }
        }
    }
    assert!(seen > 50);
}
