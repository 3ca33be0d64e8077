use hermeval_core::selfcheck::{identity_suite, oracle_equivalence};

#[test]
fn identity_suite_holds() {
    for rep in identity_suite(2024, 30, 6).unwrap() {
        assert!(rep.passed(), "{rep}");
        assert!(rep.checked >= 30);
    }
}

#[test]
fn fast_matches_oracle_on_random_triples() {
    let rep = oracle_equivalence(99, 40, 10, 6).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn group_suite_holds() {
    for rep in hermeval_core::selfcheck::group_suite(5, 6).unwrap() {
        println!("{rep}");
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn eval_q_suite_holds() {
    let rep = hermeval_core::selfcheck::eval_q_suite(17, 200).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep.checked > 1200);
}
