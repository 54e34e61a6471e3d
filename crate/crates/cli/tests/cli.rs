use std::fs;
use std::io::BufReader;
use std::path::Path;

use ellgood_cli::{run, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use ellgood_core::design::{load_permutation, load_system};
use ellgood_core::is_ell_good;

struct Output {
    code: u8,
    out: String,
    err: String,
}

fn ellgood(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["ellgood"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &Path, v: usize, construction: &str) -> std::path::PathBuf {
    let file = dir.join(format!("sts{v}.txt"));
    let v = v.to_string();
    let o = ellgood(&["gen", "--v", &v, "--construction", construction, "-o", path(&file)], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    file
}

#[test]
fn gen_writes_a_loadable_system() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), 15, "bose");
    let sts = load_system(BufReader::new(fs::File::open(&file).unwrap())).unwrap();
    assert_eq!(sts.order(), 15);
    assert_eq!(sts.blocks().len(), 35);
}

#[test]
fn gen_rejects_inadmissible_order() {
    let o = ellgood(&["gen", "--v", "11"], "");
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.err.contains("error"));
}

#[test]
fn sequence_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sts_file = gen(dir.path(), 121, "skolem");
    let perm_file = dir.path().join("perm.txt");
    let o = ellgood(&["sequence", "--ell", "4", "-i", path(&sts_file), "-o", path(&perm_file)], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out.lines().filter(|l| l.starts_with("# swap")).count(), 3);

    let sts = load_system(BufReader::new(fs::File::open(&sts_file).unwrap())).unwrap();
    let perm = load_permutation(BufReader::new(fs::File::open(&perm_file).unwrap())).unwrap();
    assert!(is_ell_good(&sts, &perm, 4).unwrap().is_good());

    let o = ellgood(&["verify", "--ell", "4", "-i", path(&sts_file), "--perm", path(&perm_file)], "");
    assert_eq!(o.code, EXIT_OK);
    // b2 = 6, b1 = 4 * (60 - 3), b0 = 2420 - 2 * 117
    assert_eq!(o.out.trim(), "good b0=2186 b1=228 b2=6 b3=0");
}

#[test]
fn verify_reads_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let fano = gen(dir.path(), 7, "auto");
    // block {1,2,4} sits inside the first window
    let o = ellgood(&["verify", "--ell", "3", "-i", path(&fano)], "1 2 4 3 5 6 7\n");
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert!(o.out.starts_with("bad block"), "{}", o.out);

    let search = ellgood(&["search", "--ell", "3", "-i", path(&fano)], "");
    assert_eq!(search.code, EXIT_OK);
    let witness = search.out.lines().next().unwrap().to_string();
    let o = ellgood(&["verify", "--ell", "3", "-i", path(&fano)], &format!("{witness}\n"));
    assert_eq!(o.code, EXIT_OK);
    // b2 = 3, b1 = 3 * (3 - 2), b0 = 7 - 6
    assert_eq!(o.out.trim(), "good b0=1 b1=3 b2=3 b3=0");
}

#[test]
fn search_proves_nonexistence() {
    let dir = tempfile::tempdir().unwrap();
    let fano = gen(dir.path(), 7, "auto");
    let o = ellgood(&["search", "--ell", "4", "-i", path(&fano)], "");
    assert_eq!(o.code, EXIT_NEGATIVE);
    assert!(o.out.starts_with("none\nnodes "), "{}", o.out);

    let o = ellgood(&["search", "--max-ell", "-i", path(&fano)], "");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.trim_end().ends_with("max_ell 3"), "{}", o.out);
}

#[test]
fn search_reports_budget_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    let sts = gen(dir.path(), 13, "auto");
    let o = ellgood(&["search", "--ell", "5", "-i", path(&sts), "--budget", "10"], "");
    assert_eq!(o.code, EXIT_INCONCLUSIVE);
    assert!(o.out.starts_with("inconclusive"));
}

#[test]
fn sequence_below_bound_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    // 9 is below the guaranteed order 11 for ell = 3
    let sts = gen(dir.path(), 9, "auto");
    let o = ellgood(&["sequence", "--ell", "3", "-i", path(&sts)], "");
    assert_eq!(o.code, EXIT_INCONCLUSIVE);
    assert!(o.out.is_empty());

    let o = ellgood(&["sequence", "--ell", "3", "-i", path(&sts), "--search-fallback"], "");
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let found = o.out.lines().next().unwrap();
    let v = ellgood(&["verify", "--ell", "3", "-i", path(&sts)], &format!("{found}\n"));
    assert_eq!(v.code, EXIT_OK);
}

#[test]
fn bounds_tables() {
    let o = ellgood(&["bounds", "--ell", "3-5"], "");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.out, "ell\tgeneral\trefined\n3\t11\t11\n4\t120\t119\n5\t584\t581\n");

    let o = ellgood(&["bounds", "--ell", "4-4", "--refined-only"], "");
    assert_eq!(o.out, "ell\trefined\n4\t119\n");

    let o = ellgood(&["bounds", "--v", "19"], "");
    assert_eq!(o.out, "v\tceiling\n19\t6\n");
}

#[test]
fn usage_errors() {
    assert_eq!(ellgood(&[], "").code, EXIT_USAGE);
    assert_eq!(ellgood(&["frobnicate"], "").code, EXIT_USAGE);
    assert_eq!(ellgood(&["sequence", "--ell", "2", "-i", "x"], "").code, EXIT_USAGE);
    assert_eq!(ellgood(&["bounds"], "").code, EXIT_USAGE);
    let o = ellgood(&["verify", "--ell", "3", "-i", "/nonexistent/sts.txt"], "");
    assert_eq!(o.code, EXIT_USAGE);
    assert_eq!(ellgood(&["--help"], "").code, EXIT_OK);
}
