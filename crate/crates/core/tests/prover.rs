use gkernel::prover::script::{mutants, replay, reverse_script, run_script, search, ProofScript, Verdict};
use gkernel::prover::term::{normalize, typecheck};
use gkernel::prover::{parse_term, Direction};
use proptest::prelude::*;

fn pentagon() -> ProofScript {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scripts/pentagon.script")).unwrap();
    ProofScript::parse(&text).unwrap()
}

#[test]
fn pentagon_script_proves() {
    let s = pentagon();
    let r = run_script(&s);
    assert_eq!(r.verdict, Verdict::Proved, "{}", r.verdict);
    assert_eq!(r.trace.len(), s.steps.len() + 1);
    assert_eq!(r.trace[0].term, normalize(&s.start).to_string());
    assert_eq!(r.trace.last().unwrap().term, normalize(&s.goal).to_string());
}

#[test]
fn pentagon_endpoints_are_the_two_composites() {
    let s = pentagon();
    assert_eq!(s.start, parse_term("W[X,Y×Z] . ^rho[X](W[Y,Z])", None).unwrap());
    assert_eq!(s.goal, parse_term("Fa[X,Y,Z] . W[X×Y,Z] . W[X,Y]", None).unwrap());
    let (src, tgt) = typecheck(&s.start).unwrap();
    assert_eq!((src.to_string(), tgt.to_string()), ("L²M".to_string(), "L²M".to_string()));
}

#[test]
fn every_intermediate_term_keeps_the_type() {
    let s = pentagon();
    let ty = typecheck(&s.start).unwrap();
    for t in replay(&s.start, &s.steps).unwrap() {
        assert_eq!(typecheck(&t).unwrap(), ty, "{t}");
    }
}

#[test]
fn reversed_pentagon_returns_to_start() {
    let s = pentagon();
    let rev = reverse_script(&s).unwrap();
    assert_eq!(rev.steps.len(), s.steps.len());
    assert!(run_script(&rev).verdict.is_proved());
    let mut both = s.steps.clone();
    both.extend(rev.steps);
    assert_eq!(replay(&s.start, &both).unwrap().last().unwrap(), &normalize(&s.start));
}

#[test]
fn printed_script_parses_back() {
    let s = pentagon();
    assert_eq!(ProofScript::parse(&s.to_text()).unwrap(), s);
}

#[test]
fn single_step_mutants_get_stuck() {
    let s = pentagon();
    let ms = mutants(&s);
    assert!(ms.len() >= 50, "only {} mutants", ms.len());
    for (label, m) in &ms {
        let v = run_script(m).verdict;
        assert!(!v.is_proved(), "mutant proved: {label}");
    }
}

#[test]
fn flipped_direction_sticks_at_that_step() {
    let s = pentagon();
    for k in 0..s.steps.len() {
        let mut m = s.clone();
        m.steps[k].direction = m.steps[k].direction.flip();
        match run_script(&m).verdict {
            Verdict::Stuck { step, .. } => assert_eq!(step, k, "flipping step {}", k + 1),
            Verdict::Proved => panic!("flipping step {} still proves", k + 1),
        }
    }
}

#[test]
fn dropping_a_step_is_detected() {
    let s = pentagon();
    for k in 0..s.steps.len() {
        let mut m = s.clone();
        m.steps.remove(k);
        assert!(!run_script(&m).verdict.is_proved(), "without step {}", k + 1);
    }
}

#[test]
fn search_closes_small_lemmas() {
    let cases = [
        ("^rho[X](U[Y] . U[Y]*)", "1[M]"),
        ("^rho[X](^rho[Y](U[Z]*))", "^rho[X,Y](U[Z])*"),
        ("(U[X]* (x) 1[Y×Z]) . (1[M] (x) iota[Y,Z]*)", "(1[M,X] (x) iota[Y,Z]*) . (U[X]* (x) 1[Y,Z])"),
    ];
    for (a, b) in cases {
        let (a, b) = (parse_term(a, None).unwrap(), parse_term(b, None).unwrap());
        let steps = search(&a, &b, 6).unwrap_or_else(|| panic!("no path from {a} to {b}"));
        assert_eq!(replay(&a, &steps).unwrap().last().unwrap(), &normalize(&b));
    }
}

fn any_step(len: usize) -> impl Strategy<Value = (usize, bool)> {
    (0..len, any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Replaying a prefix of the pentagon and then its reverse gets back to
    /// the start, and every applied step preserves typing.
    #[test]
    fn prefix_then_reverse_is_identity((k, _) in any_step(25)) {
        let s = pentagon();
        let prefix = ProofScript { steps: s.steps[..k].to_vec(), ..s.clone() };
        let terms = replay(&prefix.start, &prefix.steps).unwrap();
        let mid = terms.last().unwrap().clone();
        let rev = gkernel::prover::script::reverse_steps(&prefix.start, &prefix.steps).unwrap();
        let back = replay(&mid, &rev).unwrap();
        prop_assert_eq!(back.last().unwrap(), &normalize(&s.start));
        let ty = typecheck(&s.start).unwrap();
        for t in terms.iter().chain(&back) {
            prop_assert_eq!(typecheck(t).unwrap(), ty.clone());
        }
    }

    /// A backward step with an inferred left side undoes a forward step.
    #[test]
    fn forward_then_backward_restores((k, _) in any_step(17)) {
        let s = pentagon();
        let terms = replay(&s.start, &s.steps).unwrap();
        let st = &s.steps[k];
        if st.direction == Direction::Forward && gkernel::prover::rules::has_inferred_backward(&st.rule) {
            let after = &terms[k + 1];
            let found = gkernel::prover::rules::positions(after, false).into_iter().any(|(p, w)| {
                gkernel::prover::apply_rule(after, &st.rule, &p, w, Direction::Backward, None).as_ref() == Ok(&terms[k])
            });
            prop_assert!(found, "no inverse for {}", st);
        }
    }
}
