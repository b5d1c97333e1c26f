//! External interfaces: the file formats and the command-line contract.

use std::path::PathBuf;

use syllog::cli::run_with;

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("syllog-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(args.iter().map(|s| s.to_string()), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const SEQ1: &str = "\
fragment: S
some(artist, beekeeper)
all(artist, carpenter)
all(beekeeper, ~dentist)
|- some(carpenter, ~dentist)
";

#[test]
fn valid_prints_a_derivation_and_exits_zero() {
    let file = write_temp("seq1.syl", SEQ1);
    let (code, out, _) = run(&["valid", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("valid"));
    assert!(out.contains("rule D1"));
}

#[test]
fn unsat_chain_exits_one_with_condition_block() {
    // the chain premises with the negated conclusion
    let text = "\
all(p1, some(p2, r))
all(p2, some(p3, r))
all(p3, some(p4, r))
all(p1, all(p4, r))
some(p1, all(p4, ~r))
";
    let file = write_temp("gammastar4.syl", text);
    let (code, out, _) = run(&["sat", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: unsat"));
    assert!(out.contains("condition-c: case"));
}

#[test]
fn open_star_verdict_exits_two() {
    let text = "\
all(man, animal)
|- all(some(man, kill), some(animal, kill))
";
    let file = write_temp("rstar.syl", text);
    let (code, out, _) = run(&["valid", file.to_str().unwrap(), "--bound", "12"]);
    assert_eq!(code, 2);
    assert!(out.contains("unknown-bound"));
}

#[test]
fn invalid_sequent_exits_one_with_countermodel() {
    let file = write_temp("inv.syl", "all(p, q)\n|- some(p, q)\n");
    let (code, out, _) = run(&["valid", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("invalid"));
    assert!(out.contains("domain:"));
}

#[test]
fn parse_errors_exit_three() {
    let file = write_temp("broken.syl", "all(p q)\n");
    let (code, _, err) = run(&["parse", file.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("expected"));
}

#[test]
fn fragment_mismatch_exits_three() {
    let file = write_temp("mismatch.syl", "fragment: S\nall(~p, q)\n");
    let (code, _, err) = run(&["sat", file.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("outside"));
}

#[test]
fn prove_and_check_proof_round_trip() {
    let file = write_temp("seq1b.syl", SEQ1);
    let (code, out, _) = run(&["prove", file.to_str().unwrap(), "--system", "S"]);
    assert_eq!(code, 0);
    let proof_text: String = out
        .lines()
        .skip_while(|l| !l.starts_with("rule") && !l.starts_with("premise"))
        .map(|l| format!("{l}\n"))
        .collect();
    let proof = write_temp("seq1.proof", &proof_text);
    let (code, out, _) = run(&[
        "check-proof",
        proof.to_str().unwrap(),
        file.to_str().unwrap(),
        "--system",
        "S",
    ]);
    assert_eq!(code, 0, "check-proof output: {out}");
    assert!(out.contains("direct derivation"));

    // a tampered proof is rejected with exit 1
    let broken = proof_text.replace("some(artist, beekeeper)", "some(artist, dentist)");
    let broken_file = write_temp("seq1broken.proof", &broken);
    let (code, out, _) = run(&[
        "check-proof",
        broken_file.to_str().unwrap(),
        file.to_str().unwrap(),
        "--system",
        "S",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("rejected"));
}

#[test]
fn prove_indirect_flag_enables_reductio() {
    let text = "\
all(artist, all(artist, hate))
all(beekeeper, all(beekeeper, ~hate))
|- all(artist, ~beekeeper)
";
    let file = write_temp("indirect.syl", text);
    let (code, out, _) = run(&["prove", file.to_str().unwrap(), "--system", "R"]);
    assert_eq!(code, 1, "not directly derivable: {out}");
    let (code, out, _) = run(&[
        "prove",
        file.to_str().unwrap(),
        "--system",
        "R",
        "--indirect",
    ]);
    assert_eq!(code, 0, "indirectly derivable: {out}");
    assert!(out.contains("raa #"));
}

#[test]
fn theory_lists_true_formulas() {
    let model = write_temp(
        "small.model",
        "domain: w\nunary p: w\nunary q:\nbinary r: (w,w)\n",
    );
    let (code, out, _) = run(&["theory", model.to_str().unwrap(), "--fragment", "S"]);
    assert_eq!(code, 0);
    assert!(out.contains("all(p, p)"));
    assert!(out.contains("some(p, p)"));
    assert!(!out.contains("some(q, q)"));
}

#[test]
fn structured_output_is_stable() {
    let file = write_temp("stable.syl", SEQ1);
    let (c1, out1, _) = run(&["--format", "structured", "valid", file.to_str().unwrap()]);
    let (c2, out2, _) = run(&["--format", "structured", "valid", file.to_str().unwrap()]);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(out1, out2, "structured output must be byte-identical");
    assert!(out1.starts_with("verdict: valid\n"));
}

#[test]
fn fixtures_emit_model_and_sequent_files() {
    let dir = std::env::temp_dir().join(format!("syllog-fixtures-{}", std::process::id()));
    let (code, out, _) = run(&[
        "fixtures",
        "twin-chain",
        "--n",
        "2",
        "--i",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let model_text = std::fs::read_to_string(dir.join("A.model")).unwrap();
    let model = syllog::semantics::parse_model(&model_text).unwrap();
    assert!(model.size() >= 11);
    let core = std::fs::read_to_string(dir.join("core.syl")).unwrap();
    let parsed = syllog::surface::parse_sequent(&core).unwrap();
    assert!(model.models(parsed.premises.iter()));

    let (code, _, _) = run(&[
        "fixtures",
        "gamma-star",
        "--n",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let seq = std::fs::read_to_string(dir.join("gamma-star.syl")).unwrap();
    let parsed = syllog::surface::parse_sequent(&seq).unwrap();
    assert_eq!(parsed.premises.len(), 3);
    assert!(parsed.conclusion.is_some());
}

#[test]
fn bound_cap_env_variable_is_honored() {
    // a satisfiable relative-clause set; with a tiny cap the bounded
    // decider still finds the model, and the flag overrides the env
    let text = "some(some(p, kill), some(p, kill))\n";
    let file = write_temp("env.syl", text);
    std::env::set_var("SYLLO_BOUND_CAP", "2");
    let (code, out, _) = run(&["sat", file.to_str().unwrap()]);
    std::env::remove_var("SYLLO_BOUND_CAP");
    assert_eq!(code, 0, "{out}");
}
