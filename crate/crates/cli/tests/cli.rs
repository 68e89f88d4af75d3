use std::path::Path;
use std::process::{Command, Output};

use hankel_core::algebra::Field;
use hankel_core::carlitz::Generators;
use hankel_core::io::series_from_json;
use serde_json::Value;

fn hankel(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankel"))
        .args(args)
        .env("HANKEL_CACHE_DIR", cache)
        .env_remove("XDG_CACHE_HOME")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(cache: &Path, args: &[&str]) -> String {
    let o = hankel(cache, args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(cache: &Path, args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&ok(cache, &all)).unwrap()
}

fn line<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no {key} in {text}")).trim()
}

#[test]
fn compute_e_for_q3() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["compute", "E", "--q", "3", "--prec", "30"]);
    assert!(line(&out, "series:").starts_with("u + u^5 + u^9 + "), "{out}");
    assert!(line(&out, "series:").ends_with("O(u^30)"));
}

#[test]
fn compute_e12_has_order_30() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["compute", "E[1,2]", "--q", "3", "--prec", "100"]);
    assert_eq!(v["valuation"], 30);
    assert_eq!(v["leading"], "1");
    assert_eq!(v["series"]["precision"], 100);
}

#[test]
fn compute_f2_is_minus_h_g_squared_for_q2() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["compute", "F[2]", "--q", "2", "--prec", "40"]);
    let f2 = Field::with_order(2).unwrap();
    let s = series_from_json(&f2, &v["series"].to_string()).unwrap();
    let gens = Generators::new(&f2, 40);
    assert_eq!(s, gens.h.mul(&gens.g.pow(2)).neg().truncate(40));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let forms = ["E", "g", "h", "Delta", "d", "Ebold", "hbold", "E[2,1]", "E[1,2]", "F[3]", "powersum[1]"];
    for form in forms {
        let args = ["compute", form, "--q", "3", "--prec", "37", "--format", "json"];
        let uncached = ok(c, &[&args[..], &["--no-cache"]].concat());
        let cold = ok(c, &args);
        let warm = ok(c, &args);
        assert_eq!(uncached, cold, "{form}");
        assert_eq!(cold, warm, "{form}");
        // a higher-precision entry answers the lower-precision request by truncation
        ok(c, &["compute", form, "--q", "3", "--prec", "55"]);
        assert_eq!(ok(c, &args), uncached, "{form} after a higher-precision run");
    }
    let listing = json(c, &["cache", "list"]);
    let entries = listing["entries"].as_array().unwrap();
    assert_eq!(entries.len(), forms.len());
    assert!(entries.iter().all(|e| e["precision"] == 55 && e["valid"] == true));
    assert!(ok(c, &["cache", "clear"]).contains(&format!("removed {} entries", forms.len())));
    assert_eq!(json(c, &["cache", "list"])["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn config_file_sets_defaults_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hankel.toml");
    let other_cache = dir.path().join("other");
    std::fs::write(
        &cfg,
        format!("q = 3\nprecision = 25\njobs = 1\ncache_dir = {:?}\n", other_cache.display().to_string()),
    )
    .unwrap();
    let c = dir.path().join("c");
    let plain = ok(&c, &["compute", "g", "--q", "3", "--prec", "25", "--no-cache"]);
    let via_cfg = Command::new(env!("CARGO_BIN_EXE_hankel"))
        .args(["compute", "g", "--config", cfg.to_str().unwrap()])
        .env_remove("HANKEL_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(stdout(&via_cfg), plain);
    assert!(std::fs::read_dir(&other_cache).unwrap().count() > 0, "config cache_dir used when the env is unset");
    // flags beat the config
    let flagged = ok(&c, &["compute", "g", "--config", cfg.to_str().unwrap(), "--prec", "30"]);
    assert_eq!(line(&flagged, "precision:"), "30");

    std::fs::write(&cfg, "q = 3\nspeed = 11\n").unwrap();
    assert_eq!(hankel(&c, &["compute", "g", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn extension_fields_by_order_or_by_degree() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let by_order = ok(c, &["compute", "E", "--q", "4", "--prec", "30", "--no-cache"]);
    let by_degree = ok(c, &["compute", "E", "--q", "2", "--e", "2", "--modulus", "w^2 + w + 1", "--prec", "30"]);
    assert_eq!(by_order, by_degree);
    assert!(line(&by_order, "field:").contains("w^2 + w + 1"));
    assert_eq!(hankel(c, &["compute", "E", "--q", "2", "--e", "2", "--modulus", "w^2 + 1"]).status.code(), Some(2));
    assert_eq!(hankel(c, &["compute", "E", "--q", "4", "--e", "3"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    for args in [
        &["compute", "X", "--q", "3"][..],
        &["compute", "E", "--q", "6"],
        &["compute", "E"],
        &["compute", "E[1,9]", "--q", "3"],
        &["verify", "theorem9"],
        &["verify", "moore", "--q", "2,x"],
        &["extremal", "--q", "3", "--w", "2"],
        &["decompose", "d", "--q", "3"],
    ] {
        let o = hankel(c, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let out = ok(c, &["decompose", "E[1,1]", "--q", "3"]);
    assert_eq!(line(&out, "decomposition:"), "-(1/[1])*E*g - (1/[1])*h");
    let v = json(c, &["decompose", "E[0,2]", "--q", "3"]);
    assert_eq!(v["depth"], 4);
    let out = ok(c, &["decompose", "h", "--w", "4", "--m", "1", "--l", "0", "--q", "3"]);
    assert_eq!(line(&out, "decomposition:"), "h");
}

#[test]
fn extremal_examples() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let v = json(c, &["extremal", "--w", "10", "--m", "1", "--l", "1", "--q", "3"]);
    assert_eq!(v["max_ord"], 9);
    assert_eq!(v["form"], "E[2,1]");
    let v = json(c, &["extremal", "--w", "8", "--m", "2", "--l", "4", "--q", "3"]);
    assert_eq!(v["form"], "E[0,2]");
    let v = json(c, &["extremal", "--w", "2", "--m", "1", "--l", "1", "--q", "3"]);
    assert_eq!(v["form"], "E");
    assert_eq!(v["max_ord"], 1);
}

#[test]
fn verify_theorem1_reports_nu() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["verify", "theorem1", "--q", "3", "--kmax", "3"]);
    let rec = v["records"].as_array().unwrap().iter().find(|r| r["claim_id"] == "t1.valuation").unwrap();
    let notes: Vec<&str> = rec["cases"].as_array().unwrap().iter().map(|c| c["note"].as_str().unwrap()).collect();
    assert_eq!(notes, ["nu_k = 0", "nu_k = 2", "nu_k = 26"]);
}

#[test]
fn verify_moore_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["verify", "moore", "--q", "2", "--kmax", "4", "--samples", "50"]);
    assert!(out.lines().last().unwrap().contains("0 fail"));
}

#[test]
fn verify_reports_are_reproducible_and_written_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path();
    let run = |path: &Path| {
        let o = hankel(c, &["verify", "identities", "--q", "2", "--prec", "40", "--seed", "5", "--jobs", "1", "--format", "json", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for r in v["records"].as_array_mut().unwrap() {
            r["wall_ms"] = Value::from(0);
            for case in r["cases"].as_array_mut().unwrap() {
                case["wall_ms"] = Value::from(0);
            }
        }
        v
    };
    assert_eq!(run(&c.join("a.json")), run(&c.join("b.json")));
}

#[test]
fn verify_golden_passes() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["verify", "golden"]);
    let empty = dir.path().join("none");
    let o = hankel(dir.path(), &["verify", "golden", "--golden-dir", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

/// A failing claim sets exit status 1: the displayed expansion of d is off at c_13 for q = 3.
#[test]
fn failing_claim_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = hankel(dir.path(), &["verify", "lemmas", "--q", "3", "--kmax", "1", "--random-series", "0", "--prec", "40"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("lemma.d_expansion")).unwrap();
    assert_eq!(row.split_whitespace().nth(1), Some("fail"));
}

/// The full desk-scale run. Fails while the displayed expansion of d disagrees with the
/// computed one for q = 2, 3.
#[test]
fn verify_all_at_precision_200() {
    let dir = tempfile::tempdir().unwrap();
    let o = hankel(dir.path(), &["verify", "all", "--q", "2,3", "--prec", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o).lines().filter(|l| l.contains("fail")).collect::<Vec<_>>().join("\n"));
}
