use proptest::prelude::*;
use s2f_core::metrics::{correlation, ssim, SsimParams};
use s2f_core::watermark::{capacity, embed, extract, BinaryWatermark};
use s2f_core::Frame;

fn cover_and_mark() -> impl Strategy<Value = (Frame, BinaryWatermark)> {
    (1usize..6, 1usize..6)
        .prop_flat_map(|(bw, bh)| {
            let (w, h) = (bw * 8, bh * 8);
            let pairs = bw * bh;
            (
                prop::collection::vec(any::<u8>(), w * h),
                (1usize..=2 * pairs).prop_flat_map(move |n| {
                    // Any shape whose pixel count fits the cover.
                    (1usize..=n).prop_flat_map(move |ww| {
                        let hh = (n / ww).max(1);
                        prop::collection::vec(prop::bool::ANY, ww * hh)
                            .prop_map(move |bits| (ww, hh, bits))
                    })
                }),
                Just((w, h)),
            )
        })
        .prop_map(|(px, (ww, hh, bits), (w, h))| {
            let cover = Frame::new(w, h, px).unwrap();
            let wm = BinaryWatermark::new(
                ww,
                hh,
                bits.into_iter().map(|b| if b { 255 } else { 0 }).collect(),
            )
            .unwrap();
            (cover, wm)
        })
}

proptest! {
    #[test]
    fn round_trip_is_exact((cover, wm) in cover_and_mark()) {
        let stego = embed(&cover, &wm).unwrap();
        let got = extract(&stego, wm.width(), wm.height()).unwrap();
        prop_assert_eq!(&got, &wm);
        prop_assert_eq!(ssim(&wm, &got, &SsimParams::default()).unwrap(), 1.0);
        if let Ok(c) = correlation(&wm, &got) {
            prop_assert_eq!(c, 1.0);
        }
    }

    #[test]
    fn only_carrier_pairs_change((cover, wm) in cover_and_mark()) {
        let stego = embed(&cover, &wm).unwrap();
        let used = wm.pair_count();
        let blocks_per_row = cover.width() / 8;
        for y in 0..cover.height() {
            for x in 0..cover.width() {
                let k = (y / 8) * blocks_per_row + x / 8;
                let carrier = k < used && y % 8 == 0 && x % 8 < 2;
                if carrier {
                    prop_assert!(stego.get(x, y) == 10 || stego.get(x, y) == 20);
                } else {
                    prop_assert_eq!(stego.get(x, y), cover.get(x, y));
                }
            }
        }
        prop_assert!(used <= capacity(cover.width(), cover.height()).unwrap());
    }
}
