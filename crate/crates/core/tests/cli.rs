use invariant_ring::cli;

const ALGEBRA: &str = "1 2 1 0";

fn kx(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("kx").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Output lines after the `# sig=... seed=...` header.
fn body(args: &[&str]) -> Vec<String> {
    let (code, out, err) = kx(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# sig="));
    lines.map(str::to_string).collect()
}

#[test]
fn header_records_signature_and_seed() {
    let (_, out, _) = kx(&["--sig", ALGEBRA, "--seed", "7", "canon", "p((); 0,0; 1)"]);
    assert_eq!(out.lines().next(), Some("# sig=((1,2),(1,0)) seed=7"));
}

#[test]
fn canon_reports_automorphisms() {
    assert_eq!(body(&["canon", "p((1 2 3); 3)"]), ["p((1 2 3); 3)", "aut 3"]);
    // any 3-cycle is conjugate to the same canonical form
    assert_eq!(body(&["canon", "p((1 3 2); 3)"])[0], "p((1 2 3); 3)");
}

#[test]
fn hopf_operations() {
    assert_eq!(body(&["mul", "p((1 2); 2)", "p(;1)"]), ["p((2 3); 3)"]);
    assert_eq!(body(&["delta", "p((1 2); 2)"]), ["p(; 0) ⊗ p((1 2); 2) + p((1 2); 2) ⊗ p(; 0)"]);
    assert_eq!(body(&["delta-tensor", "p((1 2); 2)"]), ["p((1 2); 2) ⊗ p((1 2); 2)"]);
    assert_eq!(body(&["antipode", "p((1 2); 2)"]), ["-p((1 2); 2)"]);
    assert_eq!(body(&["inner", "p((1 2); 2)", "p((1 2); 2)"]), ["2"]);
}

#[test]
fn hilbert_methods_agree() {
    for n in ["4", "5"] {
        let burnside = body(&["hilbert", "--deg", n, "--method", "burnside"]);
        let formula = body(&["hilbert", "--deg", n, "--method", "formula"]);
        assert_eq!(burnside[0], formula[0]);
    }
    assert_eq!(body(&["hilbert", "--deg", "4", "--dim", "2"])[0], "3");
    assert_eq!(body(&["--sig", "2 2", "hilbert", "--deg", "2"])[0], "16");
}

#[test]
fn rank_and_generators() {
    assert_eq!(body(&["rank", "--deg", "3", "--dim", "1"]), ["1"]);
    assert_eq!(body(&["id-gens", "--dim", "1", "--deg", "2"]), ["p((); 2) - p((1 2); 2)"]);
}

#[test]
fn eval_on_builtin_structures() {
    // a single identity loop is the dimension of M_2
    let out = body(&["--sig", ALGEBRA, "eval", "--structure", "matrix:2", "p((); 0,0; 1)"]);
    assert_eq!(out, ["4"]);
}

#[test]
fn endo_commands() {
    assert_eq!(body(&["endo", "schur-expand", "(2,1)"]), ["1/3*p(1,1,1) - 1/3*p(3)"]);
    assert_eq!(body(&["endo", "product", "(1)", "(1)"]), ["{(1,1)} + {(2)}"]);
    assert_eq!(body(&["endo", "in-ideal", "--dim", "1", "(1,1)"]), ["true"]);
    assert_eq!(body(&["endo", "in-ideal", "--dim", "2", "(1,1)"]), ["false"]);
}

#[test]
fn axiom_commands() {
    let check = body(&["--sig", ALGEBRA, "axioms", "check-model", "--theory", "unital-associative", "--structure", "matrix:2"]);
    assert_eq!(check, ["true"]);
    let gens = body(&["--sig", ALGEBRA, "axioms", "gens", "--theory", "unital-associative", "--bound", "1", "--structure", "matrix:2"]);
    assert_eq!(gens.last().unwrap(), "vanish true");
}

#[test]
fn verify_suites_pass() {
    assert_eq!(body(&["verify", "psh", "--max-n", "3"]).last().unwrap(), "pass");
}

#[test]
fn error_codes() {
    let (code, _, err) = kx(&["canon", "p((1 2; 3)"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: parse: "), "{err}");

    let (code, _, err) = kx(&["bogus"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: usage: "), "{err}");

    let (code, _, err) = kx(&["--enum-limit", "10", "hilbert", "--deg", "6", "--method", "burnside"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error: limit: "), "{err}");

    let (code, _, err) = kx(&["eval", "--structure", "matrix:2", "p(;1)"]);
    assert_eq!(code, 4);
    assert!(err.starts_with("error: signature-mismatch: "), "{err}");
}
