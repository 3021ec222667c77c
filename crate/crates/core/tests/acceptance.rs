//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use polar_fastssc::nodes::{decode_rep, decode_spc};
use polar_fastssc::sim::{draw_frame, frame_rng};
use polar_fastssc::{
    build_code, channel::channel_llrs, default_cost_model, fast_decoder, latency_report, run_sweep,
    CodeSpec, DecoderSpec, FrameDecoder, LlrRule, MergerConfig, ScDecoder, SimConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

type Outcome = (bool, String);

const CODES: [(usize, usize); 5] = [(8, 4), (128, 64), (128, 32), (512, 256), (512, 128)];
const PAIRED_FRAMES: u64 = 100_000;

fn code(n: usize, k: usize) -> CodeSpec {
    build_code(n, k, "bhattacharyya", 0.5).unwrap()
}

/// Counts frames where the two decoders disagree on either output.
fn mismatches<A, B>(code: &CodeSpec, seed: u64, make_a: A, make_b: B) -> u64
where
    A: Fn() -> Box<dyn FrameDecoder> + Sync,
    B: Fn() -> Box<dyn FrameDecoder> + Sync,
{
    (0..PAIRED_FRAMES)
        .into_par_iter()
        .map_init(
            || (make_a(), make_b()),
            |(a, b), f| {
                let (_, llr) = draw_frame(code, 2.0, false, &mut frame_rng(seed, 0, f)).unwrap();
                u64::from(a.decode(&llr).unwrap() != b.decode(&llr).unwrap())
            },
        )
        .sum()
}

fn sc_vs_fast_ssc() -> Outcome {
    let mut detail = Vec::new();
    let mut total = 0;
    for (n, k) in CODES {
        let c = code(n, k);
        let m = mismatches(
            &c,
            11,
            || Box::new(ScDecoder::new(c.clone(), LlrRule::MinSum)),
            || Box::new(fast_decoder(&c, &MergerConfig::fast_ssc(), LlrRule::MinSum).unwrap()),
        );
        total += m;
        detail.push(format!("({n},{k}):{m}"));
    }
    (total == 0, format!("{PAIRED_FRAMES} frames/code, mismatches {}", detail.join(" ")))
}

fn lossless_vs_fast_ssc() -> Outcome {
    let mut detail = Vec::new();
    let mut total = 0;
    for (n, k) in CODES {
        let c = code(n, k);
        let m = mismatches(
            &c,
            12,
            || Box::new(fast_decoder(&c, &MergerConfig::fast_ssc(), LlrRule::MinSum).unwrap()),
            || Box::new(fast_decoder(&c, &MergerConfig::lossless(), LlrRule::MinSum).unwrap()),
        );
        total += m;
        detail.push(format!("({n},{k}):{m}"));
    }
    (total == 0, format!("{PAIRED_FRAMES} frames/code, mismatches {}", detail.join(" ")))
}

fn latency_targets() -> Outcome {
    let targets: [(usize, usize, [u64; 3]); 4] = [
        (128, 64, [55, 49, 42]),
        (128, 32, [50, 50, 41]),
        (512, 256, [167, 145, 130]),
        (512, 128, [165, 145, 120]),
    ];
    let design = 0.35;
    let cfgs = [MergerConfig::fast_ssc(), MergerConfig::lossless(), MergerConfig::all()];
    let cm = default_cost_model();
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, k, want) in targets {
        let c = build_code(n, k, "bhattacharyya", design).unwrap();
        let rep = latency_report(&c, &cfgs, &cm).unwrap();
        let got: Vec<u64> = rep.rows.iter().map(|r| r.steps).collect();
        let ordered = got[2] <= got[1] && got[1] <= got[0];
        let signs = rep.rows[1..].iter().all(|r| r.reduction.unwrap() >= 0);
        let within = got.iter().zip(want).all(|(&g, w)| (g as f64 - w as f64).abs() <= 0.15 * w as f64);
        ok &= ordered && signs && within;
        if (n, k) == (128, 32) {
            ok &= rep.rows[1].reduction == Some(0);
        }
        let red: Vec<String> = rep.rows[1..].iter().map(|r| format!("{}%", r.reduction.unwrap())).collect();
        detail.push(format!(
            "N={n} K={k} {}/{}/{} ({}) vs {}/{}/{}",
            got[0],
            got[1],
            got[2],
            red.join(","),
            want[0],
            want[1],
            want[2]
        ));
    }
    (ok, format!("bhattacharyya({design}): {}", detail.join("; ")))
}

fn ml_nodes() -> Outcome {
    fn corr(c: &[u8], a: &[f64]) -> f64 {
        c.iter().zip(a).map(|(&b, x)| if b == 0 { *x } else { -*x }).sum()
    }
    fn ml(book: &[Vec<u8>], a: &[f64]) -> Vec<u8> {
        book.iter()
            .max_by(|x, y| corr(x, a).total_cmp(&corr(y, a)))
            .unwrap()
            .clone()
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for n in [4usize, 8] {
        let words: Vec<Vec<u8>> = (0..1u32 << n)
            .map(|m| (0..n).map(|i| (m >> i & 1) as u8).collect())
            .collect();
        let spc_book: Vec<_> = words.iter().filter(|w| w.iter().sum::<u8>() % 2 == 0).cloned().collect();
        let rep_book = vec![vec![0u8; n], vec![1u8; n]];
        for _ in 0..10_000 {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
            bad += u32::from(*decode_rep(&a).unwrap() != ml(&rep_book, &a)[..]);
            bad += u32::from(*decode_spc(&a).unwrap() != ml(&spc_book, &a)[..]);
        }
    }
    (bad == 0, format!("REP/SPC sizes 4,8, 10^4 vectors each, mismatches {bad}"))
}

/// Eb/N0 at which the quadratic through three (snr, log10 FER) points
/// reaches `target`, taking the root on the decreasing branch.
fn crossing(pts: &[(f64, f64)], target: f64) -> Option<f64> {
    let [(x0, y0), (x1, y1), (x2, y2)] = [pts[0], pts[1], pts[2]];
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    let b = d01 - a * (x0 + x1);
    let c = y0 - a * x0 * x0 - b * x0 - target;
    if a.abs() < 1e-12 {
        return Some(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let roots = [(-b - disc.sqrt()) / (2.0 * a), (-b + disc.sqrt()) / (2.0 * a)];
    roots
        .into_iter()
        .filter(|&r| 2.0 * a * r + b < 0.0 && r >= x0)
        .min_by(|p, q| p.total_cmp(q))
}

fn fer_curve(c: &CodeSpec, mergers: MergerConfig, snrs: Vec<f64>, errors: u64, seed: u64) -> Vec<(f64, u64, u64)> {
    let mut cfg = SimConfig::new(c.clone(), DecoderSpec::Fast { mergers }, snrs.clone(), seed);
    cfg.max_frames = 5_000_000;
    cfg.max_frame_errors = errors;
    let res = run_sweep(&cfg).unwrap();
    snrs.iter()
        .zip(&res.points)
        .map(|(&s, p)| (s, p.frame_errors, p.frames))
        .collect()
}

fn lossy_gap() -> Outcome {
    let c = code(128, 64);
    let errors = 1_000;
    let snrs = vec![1.0, 2.0, 3.0];
    let fast = fer_curve(&c, MergerConfig::fast_ssc(), snrs.clone(), errors, 21);
    let all = fer_curve(&c, MergerConfig::all(), snrs, errors, 21);
    let log_fer = |v: &[(f64, u64, u64)]| -> Vec<(f64, f64)> {
        v.iter().map(|&(s, e, f)| (s, (e as f64 / f as f64).log10())).collect()
    };
    let fmt = |v: &[(f64, u64, u64)]| -> String {
        v.iter()
            .map(|&(_, e, f)| format!("{:.4}", e as f64 / f as f64))
            .collect::<Vec<_>>()
            .join("/")
    };
    let (Some(xf), Some(xa)) = (crossing(&log_fer(&fast), -2.0), crossing(&log_fer(&all), -2.0)) else {
        return (false, format!("no FER=1e-2 crossing; fast {} all {}", fmt(&fast), fmt(&all)));
    };
    let gap = xa - xf;

    // The fitted crossings must actually sit near FER = 1e-2.
    let at_f = fer_curve(&c, MergerConfig::fast_ssc(), vec![xf], 400, 22)[0];
    let at_a = fer_curve(&c, MergerConfig::all(), vec![xa], 400, 22)[0];
    let fer_f = at_f.1 as f64 / at_f.2 as f64;
    let fer_a = at_a.1 as f64 / at_a.2 as f64;
    let near = |p: f64| (0.5e-2..=2e-2).contains(&p);

    let lossy_worse = fast.iter().zip(&all).all(|(f, a)| {
        let (pf, pa) = (f.1 as f64 / f.2 as f64, a.1 as f64 / a.2 as f64);
        let sd = (pf * (1.0 - pf) / f.2 as f64 + pa * (1.0 - pa) / a.2 as f64).sqrt();
        pa >= pf - 3.0 * sd
    });
    (
        gap <= 0.5 && near(fer_f) && near(fer_a) && lossy_worse,
        format!(
            "FER at 1/2/3 dB fast-ssc {} all {}; FER=1e-2 at {xf:.3} / {xa:.3} dB (measured {fer_f:.4} / {fer_a:.4}), gap {gap:.3} dB",
            fmt(&fast),
            fmt(&all)
        ),
    )
}

fn channel_check() -> Outcome {
    let bits = 1_000_000usize;
    let chunk = 10_000usize;
    let zeros = vec![0u8; chunk];
    let errors: usize = (0..bits / chunk)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            rng.set_stream(i as u64);
            channel_llrs(&zeros, 0.0, 1.0, &mut rng)
                .unwrap()
                .iter()
                .filter(|&&l| l < 0.0)
                .count()
        })
        .sum();
    let p = Normal::standard().sf(2f64.sqrt());
    let sd = (p * (1.0 - p) / bits as f64).sqrt();
    let ber = errors as f64 / bits as f64;
    (
        (ber - p).abs() <= 3.0 * sd,
        format!("BER {ber:.5} vs Q(sqrt 2) = {p:.5}, 3 sd = {:.5}", 3.0 * sd),
    )
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_polar"))
            .args([
                "simulate", "--N", "128", "--k", "64", "--snr", "0:0.5:4", "--mergers", "all", "--seed", "7",
                "--max-frames", "3000", "--threads", threads,
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let base = run("1");
    let same = ["1", "4", "0", "3"].iter().all(|t| run(t) == base);
    (same, format!("{} CSV bytes, threads 1/4/0/3 and repeat identical", base.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 SC vs fast-SSC equivalence", sc_vs_fast_ssc),
        ("2 lossless merger equivalence", lossless_vs_fast_ssc),
        ("3 latency table", latency_targets),
        ("4 REP/SPC maximum likelihood", ml_nodes),
        ("5 lossy degradation bound", lossy_gap),
        ("6 channel self-check", channel_check),
        ("7 simulation determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "{} criterion {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
