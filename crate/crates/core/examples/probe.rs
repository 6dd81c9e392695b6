// probe: relationship between band responses of rotated image and rotated responses
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use v2tex_core::image::{rotate_quarter, Image};
use v2tex_core::v1::{build_filter_bank, SteerableConfig};

fn main() {
    let n = 32;
    let cfg = SteerableConfig::default();
    let bank = build_filter_bank(cfg, n, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let img = Image::from_pixels(Array2::from_shape_fn((n, n), |_| rng.random::<f64>())).unwrap();
    let base = bank.band_responses(&img).unwrap();
    let rot = bank.band_responses(&rotate_quarter(&img, 1)).unwrap();
    let s = 1;
    for o in 0..4 {
        for (tag, o2) in [("o+2", (o + 2) % 4)] {
            let b_rot = &rot[cfg.band_index(s, o2)];
            let b_base = &base[cfg.band_index(s, o)];
            // rot90 of base response
            let m = n;
            let r_base = Array2::from_shape_fn((m, m), |(i, j)| b_base[[j, m - 1 - i]]);
            let mut d_plain = 0.0f64;
            let mut d_conj = 0.0f64;
            let mut mag = 0.0f64;
            for i in 4..m-4 { for j in 4..m-4 {
                d_plain = d_plain.max((b_rot[[i,j]] - r_base[[i,j]]).norm());
                d_conj = d_conj.max((b_rot[[i,j]] - r_base[[i,j]].conj()).norm());
                mag = mag.max(b_rot[[i,j]].norm());
            }}
            println!("o={o} vs {tag}={o2}: plain={d_plain:.3e} conj={d_conj:.3e} (scale {mag:.3e})");
        }
    }
}
