use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mlbound"))
}

fn presets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    bin().args(args).arg(cfg).arg("--out").arg(out).output().unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

/// `l -> A_l` from a cache file, summing IOWEF rows over `w`.
fn counts(path: &Path) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let n: usize = lines.next().unwrap().split_whitespace().next().unwrap().parse().unwrap();
    let mut a = vec![0.0; n + 1];
    for line in lines {
        let f: Vec<f64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        let (l, ln) = (f[f.len() - 2] as usize, f[f.len() - 1]);
        a[l] += ln.exp();
    }
    a
}

#[test]
fn spectrum_expurgated_random_8_7() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", "[code]\nkind = \"expurgated-random\"\nn = 8\nk = 7\n");
    let out = dir.path().join("s.txt");
    assert!(run(&["spectrum"], &cfg, &out).status.success());
    let a = counts(&out);
    assert!((a[1] - 4.0).abs() < 1e-12 && (a[2] - 7.0).abs() < 1e-12);
    assert!(a[3..].iter().all(|&x| x == 0.0));
}

#[test]
fn spectrum_binomial_reference_with_ratio_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "[code]\nkind = \"binomial-reference\"\nn = 8\nrate = 0.875\n[output]\nratio_table = \"ratio.csv\"\n",
    );
    let out = dir.path().join("s.txt");
    assert!(run(&["spectrum"], &cfg, &out).status.success());
    let a = counts(&out);
    let binom = [1.0, 8.0, 28.0, 56.0, 70.0, 56.0, 28.0, 8.0, 1.0];
    for l in 0..=8 {
        assert!((a[l] - binom[l] / 2.0).abs() < 1e-12 * binom[l], "l = {l}");
    }
    let (header, rows) = csv_rows(&dir.path().join("ratio.csv"));
    assert_eq!(header, ["l", "l_over_n", "log10_ratio"]);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap().abs() < 1e-12));
}

#[test]
fn spectrum_turbo_combine_preserves_total_count() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.txt");
    let o = run(&["spectrum"], &presets().join("turbo_hamming_m4.toml"), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let ln_total: f64 = text.lines().next().unwrap().strip_prefix("# ln_total ").unwrap().parse().unwrap();
    assert!((ln_total - 11.0 * std::f64::consts::LN_2).abs() < 1e-9);
    assert!(text.lines().nth(1).unwrap() == "19 11");
    let total: f64 = counts(&out).iter().sum();
    assert!((total - 2048.0).abs() < 1e-6);
}

#[test]
fn cached_spectrum_reproduces_the_direct_sweep() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("io.txt");
    assert!(run(&["spectrum"], &presets().join("turbo_hamming_m4.toml"), &cache).status.success());
    let body = "[sweep]\nebno_db_start = 2\nebno_db_stop = 4\nebno_db_step = 1\n\
                [[bound]]\nname = \"tsb\"\n[[bound]]\nname = \"union\"\nmode = \"bit\"\n";
    let from_file = write(&dir, "a.toml", &format!("[code]\nkind = \"file\"\npath = \"io.txt\"\n{body}"));
    let direct = write(
        &dir,
        "b.toml",
        &format!("[code]\nkind = \"turbo-combine\"\nnamed = \"hamming\"\nm = 4\ncopies = 2\n{body}"),
    );
    let (oa, ob) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(run(&["bounds"], &from_file, &oa).status.success());
    assert!(run(&["bounds"], &direct, &ob).status.success());
    let ((_, ra), (_, rb)) = (csv_rows(&oa), csv_rows(&ob));
    assert_eq!(ra.len(), 6);
    for (x, y) in ra.iter().zip(&rb) {
        let (vx, vy): (f64, f64) = (x[2].parse().unwrap(), y[2].parse().unwrap());
        assert!((vx / vy - 1.0).abs() < 1e-12, "{x:?} vs {y:?}");
    }
}

#[test]
fn bounds_rows_have_the_documented_columns() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&["bounds"], &presets().join("serial_rs.toml"), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        ["ebno_db", "bound", "value", "log10_value", "rho_opt", "tsb_radius", "partition_max_u"]
    );
    assert_eq!(rows.len(), 41);
    assert!(rows.iter().all(|r| r[1] == "serial-rs/union"));
}

#[test]
fn serial_rs_presets_show_the_expurgation_gain() {
    // first Eb/N0 on the grid where the bound drops below 1e-4
    let first_below = |preset: &str| -> f64 {
        let dir = TempDir::new().unwrap();
        let out = dir.path().join("b.csv");
        assert!(run(&["bounds"], &presets().join(preset), &out).status.success());
        let (_, rows) = csv_rows(&out);
        rows.iter()
            .find(|r| r[2].parse::<f64>().unwrap() < 1e-4)
            .map(|r| r[0].parse().unwrap())
            .unwrap()
    };
    let gain = first_below("serial_rs_unexpurgated.toml") - first_below("serial_rs.toml");
    assert!((0.05..=0.15).contains(&gain), "gain {gain}");
}

#[test]
fn values_above_one_are_clamped() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "[code]\nkind = \"exhaustive\"\nnamed = \"golay24\"\n\
         [sweep]\nebno_db_start = -10\nebno_db_stop = -8\nebno_db_step = 0.5\n\
         [[bound]]\nname = \"union\"\n",
    );
    let out = dir.path().join("b.csv");
    assert!(run(&["bounds"], &cfg, &out).status.success());
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[2] == "1" && r[3] == "0"));
}

#[test]
fn sweep_values_do_not_increase_with_snr() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let o = bin()
        .args(["bounds"])
        .arg(presets().join("turbo_hamming_m4.toml"))
        .arg("--out")
        .arg(&out)
        .args(["--threads", "2"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let (_, rows) = csv_rows(&out);
    let mut by_bound: std::collections::BTreeMap<String, Vec<(f64, f64)>> = Default::default();
    for r in &rows {
        by_bound
            .entry(r[1].clone())
            .or_default()
            .push((r[0].parse().unwrap(), r[2].parse().unwrap()));
    }
    assert_eq!(by_bound.len(), 10);
    for (b, pts) in by_bound {
        assert_eq!(pts.len(), 29);
        for w in pts.windows(2) {
            assert!(w[0].0 < w[1].0);
            assert!(w[1].1 <= w[0].1 * (1.0 + 1e-9), "{b}: {w:?}");
        }
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let cfg = presets().join("multiple_turbo_m4.toml");
    let mut outs = Vec::new();
    for t in ["1", "3"] {
        let out = dir.path().join(format!("b{t}.json"));
        let o = bin()
            .args(["bounds"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .args(["--threads", t, "--format", "json"])
            .output()
            .unwrap();
        assert!(o.status.success());
        outs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    let v: serde_json::Value = serde_json::from_slice(&outs[0]).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 29 * 10);
}

#[test]
fn simulate_hamming_7_4_dominance_and_determinism() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "[code]\nkind = \"exhaustive\"\nnamed = \"hamming\"\nm = 3\n\
         [sweep]\nebno_db_start = 2\nebno_db_stop = 4\nebno_db_step = 1\n\
         [simulate]\ntrials = 100000\n\
         [[bound]]\nname = \"union\"\n[[bound]]\nname = \"tsb\"\n[[bound]]\nname = \"tsb\"\nmode = \"bit\"\n",
    );
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = bin().arg("simulate").arg(&cfg).arg("--out").arg(out).args(["--seed", "11"]).output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (header, rows) = csv_rows(&a);
    assert_eq!(&header[..4], ["ebno_db", "trials", "block_errors", "pe_hat"]);
    assert_eq!(&header[8..], ["union", "tsb", "tsb-bit"]);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let f = |i: usize| r[i].parse::<f64>().unwrap();
        let (pe_floor, pb_floor) = (f(3) - 3.0 * f(4), f(6) - 3.0 * f(7));
        assert!(f(8) >= pe_floor && f(9) >= pe_floor && f(10) >= pb_floor, "{r:?}");
    }

    let c = dir.path().join("c.csv");
    let o = bin().arg("simulate").arg(&cfg).arg("--out").arg(&c).args(["--seed", "12"]).output().unwrap();
    assert!(o.status.success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn zero_trials_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "[code]\nkind = \"exhaustive\"\nnamed = \"hamming\"\nm = 3\n\
         [sweep]\nebno_db_start = 1\nebno_db_stop = 2\nebno_db_step = 1\n[simulate]\ntrials = 0\n",
    );
    let o = run(&["simulate"], &cfg, &dir.path().join("x.csv"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let cases = [
        // bit bound without an IOWEF
        "[code]\nkind = \"expurgated-random\"\nn = 8\nk = 7\n\
         [sweep]\nebno_db_start = 1\nebno_db_stop = 2\nebno_db_step = 1\n[[bound]]\nname = \"union\"\nmode = \"bit\"\n",
        // unknown bound name
        "[code]\nkind = \"expurgated-random\"\nn = 8\nk = 7\n\
         [sweep]\nebno_db_start = 1\nebno_db_stop = 2\nebno_db_step = 1\n[[bound]]\nname = \"berlekamp\"\n",
        // start above stop
        "[code]\nkind = \"expurgated-random\"\nn = 8\nk = 7\n\
         [sweep]\nebno_db_start = 3\nebno_db_stop = 2\nebno_db_step = 1\n[[bound]]\nname = \"union\"\n",
        // unknown kind
        "[code]\nkind = \"ldpc\"\n",
        // weight set outside 1..=N
        "[code]\nkind = \"expurgated-random\"\nn = 8\nk = 7\n\
         [sweep]\nebno_db_start = 1\nebno_db_stop = 2\nebno_db_step = 1\n[[bound]]\nname = \"msfb\"\nu = [9]\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(&dir, &format!("c{i}.toml"), text);
        let o = run(&["bounds"], &cfg, &out);
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["bounds"], &dir.path().join("missing.toml"), &out);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupt_cache_file_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.txt", "19 11\n3 oops\n");
    let cfg = write(
        &dir,
        "c.toml",
        "[code]\nkind = \"file\"\npath = \"bad.txt\"\n\
         [sweep]\nebno_db_start = 1\nebno_db_stop = 2\nebno_db_step = 1\n[[bound]]\nname = \"union\"\n",
    );
    let o = run(&["bounds"], &cfg, &dir.path().join("x.csv"));
    assert_eq!(o.status.code(), Some(2));
}
