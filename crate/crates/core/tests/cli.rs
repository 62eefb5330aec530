//! The `pas` binary end to end.

mod common;

use std::fs;
use std::process::{Command, Output};

use pas_shaping::shaping::io::{read_bit_file, write_bit_file};
use pas_shaping::shaping::BitBlock;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pas")).args(args).env("PAS_WORKERS", "1").output().expect("spawn pas")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn plan_prints_the_operating_point() {
    let text = stdout(&pas(&["plan", "-n", "200"]));
    assert!(text.contains("k = 433"), "{text}");
    assert!(text.contains("E_max = 3896"), "{text}");
    assert!(text.contains("gamma = 1/3"), "{text}");
}

#[test]
fn plan_rejects_infeasible_rates() {
    let out = pas(&["plan", "--fec-rate", "3/4"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn shape_then_deshape_restores_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let (bits, amps, back) = (dir.path().join("in.bin"), dir.path().join("a.txt"), dir.path().join("out.bin"));
    // 433 bits per ESS-200 block
    let original = BitBlock::random(433 * 5, &mut ChaCha8Rng::seed_from_u64(1));
    write_bit_file(&bits, &original).unwrap();
    let preset = common::preset("awgn-ess-200.cfg");
    let preset = preset.to_str().unwrap();
    stdout(&pas(&["shape", preset, "-i", bits.to_str().unwrap(), "-o", amps.to_str().unwrap()]));
    let lines = fs::read_to_string(&amps).unwrap();
    assert_eq!(lines.lines().count(), 5);
    assert_eq!(lines.lines().next().unwrap().split_whitespace().count(), 200);
    stdout(&pas(&["deshape", preset, "-i", amps.to_str().unwrap(), "-o", back.to_str().unwrap()]));
    assert_eq!(read_bit_file(&back).unwrap(), original);

    // 2165 bits are not a whole number of 216-bit blocks
    let out = pas(&["shape", preset, "-n", "100", "-i", bits.to_str().unwrap(), "-o", amps.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn sweep_awgn_writes_csv_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let preset = common::preset("awgn-ccdm-200.cfg");
    let args = ["sweep-awgn", preset.to_str().unwrap(), "--snr-db", "12:13:1", "--symbols", "2000", "-o", csv.to_str().unwrap()];
    stdout(&pas(&args));
    let first = fs::read_to_string(&csv).unwrap();
    assert_eq!(first.lines().count(), 3);
    stdout(&pas(&args));
    assert_eq!(fs::read_to_string(&csv).unwrap(), first);

    let printed = stdout(&pas(&args[..args.len() - 2]));
    assert_eq!(printed, first);
}

#[test]
fn sweep_commands_check_the_channel() {
    let preset = common::preset("awgn-uniform.cfg");
    assert!(!pas(&["sweep-fiber", preset.to_str().unwrap()]).status.success());
}

#[test]
fn sweep_fiber_defaults_to_the_fiber_channel() {
    let text = stdout(&pas(&[
        "sweep-fiber", "--symbols", "1024", "--power-dbm", "0", "--spans", "1", "--step-km", "80", "--set", "gamma_nl=0",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].contains(",80"), "{}", rows[1]);
}

#[test]
fn compare_refuses_mismatched_configs() {
    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("odd.cfg");
    fs::write(&odd, format!("include = {}\nfec_rate = 4/5\n", common::preset("awgn-ess-100.cfg").display())).unwrap();
    let out = pas(&["compare", common::preset("awgn-ess-200.cfg").to_str().unwrap(), odd.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn compare_joins_schemes() {
    let presets: Vec<String> = ["awgn-uniform.cfg", "awgn-ess-100.cfg"]
        .iter()
        .map(|p| common::preset(p).to_str().unwrap().to_string())
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let small = |p: &str, name: &str| {
        let path = dir.path().join(name);
        fs::write(&path, format!("include = {p}\nsnr_db = 14\nsymbols = 2000\n")).unwrap();
        path.to_str().unwrap().to_string()
    };
    let (a, b) = (small(&presets[0], "u.cfg"), small(&presets[1], "e.cfg"));
    let text = stdout(&pas(&["compare", &a, &b]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].ends_with("delta_air_4d,delta_snr_eff_db"));
    assert_eq!(lines.len(), 3);
    let delta: f64 = lines[2].split(',').rev().nth(1).unwrap().parse().unwrap();
    assert!(delta > 0.0, "{}", lines[2]);
}

#[test]
fn trellis_dump_lists_counts() {
    let text = stdout(&pas(&["trellis-dump", "-m", "2", "-n", "2", "--e-max", "10"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,e,count"));
    let rows: Vec<(u64, u64, u64)> = lines
        .map(|l| {
            let v: Vec<u64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect();
    // amplitudes {1, 3}, two positions, energy at most 10: (1,1), (1,3), (3,1)
    assert!(rows.contains(&(0, 0, 3)), "{rows:?}");
    assert!(rows.contains(&(1, 1, 2)) && rows.contains(&(1, 9, 1)), "{rows:?}");
    assert!(rows.contains(&(2, 2, 1)) && rows.contains(&(2, 10, 1)), "{rows:?}");
    assert!(!rows.iter().any(|r| r.1 > 10));
}
