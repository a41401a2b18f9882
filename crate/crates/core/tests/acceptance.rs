//! Exit criteria for the toolkit. Runs every criterion, prints one
//! PASS/FAIL line each, and exits non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s2f_core::codec::{decode, encode, encode_with, parse, serialize, EncodeOptions};
use s2f_core::media::gen_synthetic;
use s2f_core::metrics::{correlation, mse, psnr, sequence_report, ssim, SsimParams};
use s2f_core::motion::{estimate_motion, search_block, MeanMatrix, MotionVector, SearchConfig};
use s2f_core::watermark::{embed, embed_sequence, extract, BinaryWatermark};
use s2f_core::{Frame, GrayImage, VideoSequence};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn random_wm(rng: &mut ChaCha8Rng, max_pixels: usize) -> BinaryWatermark {
    loop {
        let w = rng.gen_range(1..=64);
        let h = rng.gen_range(1..=max_pixels / w);
        let px: Vec<u8> = (0..w * h)
            .map(|_| if rng.gen() { 255 } else { 0 })
            .collect();
        // Correlation needs a non-constant watermark.
        if px.contains(&0) && px.contains(&255) {
            return BinaryWatermark::new(w, h, px).unwrap();
        }
    }
}

fn random_frame(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Frame {
    Frame::from_fn(w, h, |_, _| rng.gen()).unwrap()
}

/// 1. Uncompressed watermark round-trip.
fn watermark_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = SsimParams::default();
    for i in 0..100 {
        let cover = random_frame(&mut rng, 256, 256);
        let wm = random_wm(&mut rng, 2048);
        let got = extract(
            &embed(&cover, &wm).map_err(|e| e.to_string())?,
            wm.width(),
            wm.height(),
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            got == wm,
            "cover {i}: {}x{} watermark not recovered",
            wm.width(),
            wm.height()
        );
        let c = correlation(&wm, &got).map_err(|e| e.to_string())?;
        let s = ssim(&wm, &got, &params).map_err(|e| e.to_string())?;
        ensure!(c == 1.0 && s == 1.0, "cover {i}: correlation {c}, ssim {s}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "100 covers exact, correlation = ssim = 1.0, {elapsed:.2?}"
    ))
}

/// 2. Exactly two changed pixels per used 8×8 block (2/64 = 3.125 %).
fn modification_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        // Keep carrier levels out of the cover so every write is a change.
        let cover = Frame::from_fn(256, 256, |_, _| loop {
            let v: u8 = rng.gen();
            if v != 10 && v != 20 {
                break v;
            }
        })
        .unwrap();
        let wm = random_wm(&mut rng, 2048);
        let stego = embed(&cover, &wm).map_err(|e| e.to_string())?;
        let used = wm.pixels().len().div_ceil(2);
        for k in 0..1024 {
            let (bx, by) = ((k % 32) * 8, (k / 32) * 8);
            let mut changed = Vec::new();
            for y in by..by + 8 {
                for x in bx..bx + 8 {
                    if stego.get(x, y) != cover.get(x, y) {
                        changed.push((x - bx, y - by));
                    }
                }
            }
            let expect: &[(usize, usize)] = if k < used { &[(0, 0), (1, 0)] } else { &[] };
            ensure!(changed == expect, "block {k}: changed {changed:?}");
            if k < used {
                let fraction = changed.len() as f64 / 64.0;
                ensure!(fraction == 0.03125, "block {k}: fraction {fraction}");
            }
        }
    }
    Ok("2 of 64 pixels (3.125 %) in every used block, 0 elsewhere".into())
}

/// 3. Ground-truth recovery for all 81 block-aligned global shifts.
fn motion_ground_truth() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let mut checked = 0usize;
    for k in -4i32..=4 {
        for m in -4i32..=4 {
            let v = gen_synthetic(
                64,
                64,
                2,
                (4 * k, 4 * m),
                100 + ((k + 4) * 9 + m + 4) as u64,
            )
            .map_err(|e| e.to_string())?;
            let field =
                estimate_motion(&v.frames()[1], &v.frames()[0], &cfg).map_err(|e| e.to_string())?;
            for r in 0..16i32 {
                for c in 0..16i32 {
                    let (sr, sc) = (r + m, c + k);
                    // Source block must be reachable without wrapping.
                    if !(0..16).contains(&sr) || !(0..16).contains(&sc) {
                        continue;
                    }
                    let got = field.get(r as usize, c as usize);
                    ensure!(
                        got == MotionVector::new(4 * k, 4 * m),
                        "shift ({}, {}), block ({r}, {c}): got ({}, {})",
                        4 * k,
                        4 * m,
                        got.dx,
                        got.dy
                    );
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("81 shifts, {checked} blocks exact, {elapsed:.2?}"))
}

/// Independent enumeration of the clipped 9×9 window with the tie rules.
fn brute_force(current: f64, m: &MeanMatrix, (cr, cc): (usize, usize)) -> MotionVector {
    let mut best: Option<((f64, i64, usize), MotionVector)> = None;
    let mut order = 0usize;
    for dr in -4i64..=4 {
        for dc in -4i64..=4 {
            let (r, c) = (cr as i64 + dr, cc as i64 + dc);
            if r < 0 || c < 0 || r >= m.rows() as i64 || c >= m.cols() as i64 {
                continue;
            }
            let key = (
                (current - m.get(r as usize, c as usize)).abs(),
                dr.abs().max(dc.abs()),
                order,
            );
            order += 1;
            let better = match &best {
                None => true,
                Some((b, _)) => key.partial_cmp(b) == Some(std::cmp::Ordering::Less),
            };
            if better {
                best = Some((key, MotionVector::new(dc as i32 * 4, dr as i32 * 4)));
            }
        }
    }
    best.unwrap().1
}

/// 4. search_block agrees with brute force on 1,000 random triples.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SearchConfig::default();
    for i in 0..1000 {
        let rows = rng.gen_range(1..=20);
        let cols = rng.gen_range(1..=20);
        let levels = rng.gen_range(1..=64u32);
        let values = (0..rows * cols)
            .map(|_| f64::from(rng.gen_range(0..levels) * (4080 / levels)) / 16.0)
            .collect();
        let m = MeanMatrix::from_values(rows, cols, values).unwrap();
        let center = (rng.gen_range(0..rows), rng.gen_range(0..cols));
        let current = f64::from(rng.gen_range(0..=4080u32)) / 16.0;
        let got = search_block(current, &m, center, &cfg);
        let want = brute_force(current, &m, center);
        ensure!(got == want, "triple {i}: got {got:?}, brute force {want:?}");
    }
    Ok("1000 triples identical".into())
}

/// 5. Static content, I frames and the container are lossless.
fn codec_losslessness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for gop in [1u8, 2, 6, 9] {
        let n = rng.gen_range(1..=20);
        let still = random_frame(&mut rng, 64, 48);
        let v = VideoSequence::new(vec![still; n]).unwrap();
        let s = encode(&v, gop, None).map_err(|e| e.to_string())?;
        ensure!(
            decode(&s).map_err(|e| e.to_string())? == v,
            "static video, gop {gop}"
        );
        ensure!(
            parse(&serialize(&s)).map_err(|e| e.to_string())? == s,
            "container, gop {gop}"
        );

        let moving =
            VideoSequence::new((0..n).map(|_| random_frame(&mut rng, 64, 48)).collect()).unwrap();
        let s = encode(&moving, gop, None).map_err(|e| e.to_string())?;
        let d = decode(&s).map_err(|e| e.to_string())?;
        for k in (0..n).step_by(gop as usize) {
            ensure!(
                d.frames()[k] == moving.frames()[k],
                "I frame {k}, gop {gop}"
            );
        }
        ensure!(
            parse(&serialize(&s)).map_err(|e| e.to_string())? == s,
            "container, gop {gop}"
        );
    }
    Ok("static videos, I frames and parse(serialize) exact".into())
}

/// 6. Encoder reconstruction equals decoder output.
fn closed_loop_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut slowest = Duration::ZERO;
    for seed in 0..5u64 {
        let motion = (rng.gen_range(-16..=16), rng.gen_range(-16..=16));
        let v = gen_synthetic(256, 256, 20, motion, seed).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let enc = encode_with(&v, &EncodeOptions::default()).map_err(|e| e.to_string())?;
        let dec = decode(&enc.stream).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure!(dec == enc.reconstruction, "seed {seed}, motion {motion:?}");
    }
    ensure!(
        slowest < Duration::from_secs(1),
        "encode+decode took {slowest:?}"
    );
    Ok(format!(
        "5 videos of 20 frames at 256x256 agree, slowest encode+decode {slowest:.2?}"
    ))
}

/// 7. Closed-form metric anchors and symmetry.
fn metric_anchors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = Frame::from_fn(64, 64, |_, _| rng.gen_range(0..=254)).unwrap();
    let plus_one = Frame::from_fn(64, 64, |x, y| a.get(x, y) + 1).unwrap();
    let p = psnr(&a, &plus_one).map_err(|e| e.to_string())?;
    ensure!((p - 48.1308).abs() <= 1e-4, "psnr {p}");

    let black = GrayImage::filled(64, 64, 0).unwrap();
    let white = GrayImage::filled(64, 64, 255).unwrap();
    let params = SsimParams::default();
    let s = ssim(&black, &white, &params).map_err(|e| e.to_string())?;
    ensure!((s - 9.99904e-5).abs() <= 1e-9, "ssim {s}");

    let inv = Frame::from_fn(64, 64, |x, y| 255 - a.get(x, y)).unwrap();
    let c = correlation(&a, &inv).map_err(|e| e.to_string())?;
    ensure!((c + 1.0).abs() <= 1e-12, "correlation {c}");

    for _ in 0..50 {
        let x = random_frame(&mut rng, 32, 32);
        let y = random_frame(&mut rng, 32, 32);
        let pairs = [
            (mse(&x, &y).unwrap(), mse(&y, &x).unwrap()),
            (psnr(&x, &y).unwrap(), psnr(&y, &x).unwrap()),
            (correlation(&x, &y).unwrap(), correlation(&y, &x).unwrap()),
            (
                ssim(&x, &y, &params).unwrap(),
                ssim(&y, &x, &params).unwrap(),
            ),
        ];
        for (u, v) in pairs {
            ensure!((u - v).abs() < 1e-12, "asymmetric: {u} vs {v}");
        }
    }
    Ok(format!(
        "psnr {p:.6} dB, ssim {s:.6e}, correlation {c}, symmetric"
    ))
}

/// 8. GOP-6 periodic structure of the watermark report.
fn gop_periodic_report() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let wm = {
        let px = (0..31 * 64)
            .map(|_| if rng.gen() { 255 } else { 0 })
            .collect();
        BinaryWatermark::new(31, 64, px).unwrap()
    };
    let video = gen_synthetic(256, 256, 20, (8, -4), 8).map_err(|e| e.to_string())?;
    let marked = embed_sequence(&video, &wm).map_err(|e| e.to_string())?;
    let stream = encode(&marked, 6, Some((31, 64))).map_err(|e| e.to_string())?;
    let decoded = decode(&parse(&serialize(&stream)).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let report = sequence_report(&marked, &decoded, Some(&wm), &SsimParams::default())
        .map_err(|e| e.to_string())?;
    let csv = report.to_csv();
    let mut lines = csv.lines();
    ensure!(
        lines.next() == Some("frame,mse,psnr_db,wm_correlation,wm_ssim"),
        "header"
    );
    let mut below_one = 0;
    for (k, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        ensure!(
            cols.len() == 5 && cols[0] == k.to_string(),
            "row {k}: {line}"
        );
        if k % 6 == 0 {
            ensure!(cols[3] == "1" && cols[2] == "inf", "I frame {k}: {line}");
        } else if !cols[3].is_empty() {
            let c: f64 = cols[3].parse().map_err(|_| format!("row {k}: {line}"))?;
            ensure!(c <= 1.0, "P frame {k}: correlation {c}");
            if c < 1.0 {
                below_one += 1;
            }
        }
    }
    ensure!(report.rows.len() == 20, "{} rows", report.rows.len());
    Ok(format!(
        "correlation 1 at frames 0,6,12,18; {below_one} P frames below 1"
    ))
}

/// 9. Serialized size of a 20-frame 256×256 encode.
fn compression_ratio() -> Outcome {
    let v = gen_synthetic(256, 256, 20, (4, 4), 9).map_err(|e| e.to_string())?;
    let s = encode(&v, 6, None).map_err(|e| e.to_string())?;
    let len = serialize(&s).len();
    let want = 24 + 4 * (65536 + 1) + 16 * (8192 + 1);
    ensure!(len == want, "{len} bytes, expected {want}");
    ensure!(
        s.type_pattern() == "IPPPPPIPPPPPIPPPPPIP",
        "pattern {}",
        s.type_pattern()
    );
    Ok(format!("{len} bytes = 24 + 4·65537 + 16·8193"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 watermark round-trip", watermark_round_trip),
        ("2 modification bound", modification_bound),
        ("3 motion ground truth", motion_ground_truth),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 codec losslessness", codec_losslessness),
        ("6 closed-loop agreement", closed_loop_agreement),
        ("7 metric anchors", metric_anchors),
        ("8 GOP-periodic report", gop_periodic_report),
        ("9 compression ratio", compression_ratio),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
