use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s2f_core::codec::{
    decode, encode, encode_with, parse, serialize, EncodeOptions, FrameRecord, HEADER_LEN,
};
use s2f_core::media::gen_synthetic;
use s2f_core::{Frame, VideoSequence};

fn random_video(seed: u64, w: usize, h: usize, n: usize) -> VideoSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames = (0..n)
        .map(|_| Frame::from_fn(w, h, |_, _| rng.gen()).unwrap())
        .collect();
    VideoSequence::new(frames).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn container_round_trip(seed in any::<u64>(), n in 1usize..14, gop in 1u8..8, bw in 1usize..4, bh in 1usize..4) {
        let v = random_video(seed, bw * 8, bh * 8, n);
        let s = encode(&v, gop, None).unwrap();
        let bytes = serialize(&s);
        let back = parse(&bytes).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize(&back), bytes);
    }

    #[test]
    fn intra_frames_and_closed_loop(seed in any::<u64>(), n in 1usize..14, gop in 1u8..8) {
        let v = random_video(seed, 32, 16, n);
        let enc = encode_with(&v, &EncodeOptions { gop_length: gop, ..EncodeOptions::default() }).unwrap();
        let dec = decode(&enc.stream).unwrap();
        prop_assert_eq!(&dec, &enc.reconstruction);
        for k in (0..n).step_by(gop as usize) {
            prop_assert_eq!(&dec.frames()[k], &v.frames()[k]);
        }
    }

    #[test]
    fn static_content_lossless(seed in any::<u64>(), n in 1usize..14, gop in 1u8..8) {
        let f = random_video(seed, 24, 16, 1).frames()[0].clone();
        let v = VideoSequence::new(vec![f; n]).unwrap();
        prop_assert_eq!(decode(&encode(&v, gop, None).unwrap()).unwrap(), v);
    }
}

#[test]
fn record_sizes() {
    let v = gen_synthetic(64, 32, 8, (4, 4), 2).unwrap();
    let s = encode(&v, 6, None).unwrap();
    let bytes = serialize(&s);
    let (i_len, p_len) = (1 + 64 * 32, 1 + 64 * 32 / 8);
    assert_eq!(bytes.len(), HEADER_LEN + 2 * i_len + 6 * p_len);
    assert_eq!(
        s.records()
            .iter()
            .filter(|r| matches!(r, FrameRecord::Predicted(_)))
            .count(),
        6
    );
}

#[test]
fn drift_stops_at_intra_frame() {
    // Changing a P frame of the first group cannot affect the second group.
    let a = random_video(1, 32, 32, 12);
    let mut frames = a.frames().to_vec();
    frames[3] = random_video(2, 32, 32, 1).frames()[0].clone();
    let b = VideoSequence::new(frames).unwrap();
    let da = decode(&encode(&a, 6, None).unwrap()).unwrap();
    let db = decode(&encode(&b, 6, None).unwrap()).unwrap();
    assert_eq!(da.frames()[6..], db.frames()[6..]);
}

#[test]
fn encoding_is_deterministic() {
    let v = gen_synthetic(64, 64, 13, (-8, 4), 21).unwrap();
    let a = serialize(&encode(&v, 6, Some((8, 8))).unwrap());
    let b = serialize(&encode(&v, 6, Some((8, 8))).unwrap());
    assert_eq!(a, b);
}
