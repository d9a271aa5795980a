//! The production decoder must match the brute-force reference per step on
//! randomized instances, for all three rules. Shapes are chosen to cross
//! word boundaries in both the packed weight rows and the activation bitmaps.

use mvscn::experiment::{generate_messages, trial_rng};
use mvscn::learning::store;
use mvscn::oracle::naive_decode_step;
use mvscn::{ActivationState, Arch, Decoder, NetworkConfig, WeightMatrix};
use rand::Rng;

fn random_instances(shapes: &[(usize, usize, u32)], per_shape: usize, seed: u64) {
    let mut rng = trial_rng(seed, 0);
    for &(c, l, w_max) in shapes {
        let config = NetworkConfig::new(c, l, w_max).unwrap();
        for _ in 0..per_shape {
            let m = rng.gen_range(0..=5);
            let msgs = generate_messages(m, &config, &mut rng).unwrap();
            let mut net = WeightMatrix::new(config);
            for msg in &msgs {
                store(&mut net, msg).unwrap();
                // occasional double store exercises multi-valued weights
                if rng.gen_bool(0.3) {
                    store(&mut net, msg).unwrap();
                }
            }

            let mut act = ActivationState::for_config(&config);
            for i in 0..c {
                for j in 0..l {
                    if rng.gen_bool(0.35) {
                        act.set(i, j, true);
                    }
                }
            }

            for arch in Arch::ALL {
                let decoder = Decoder::new(&net, arch);
                // follow the fast path's own trajectory a few steps deep
                let mut state = act.clone();
                for step in 0..3 {
                    let fast = decoder.step(&state);
                    let reference = naive_decode_step(&net, &state, arch);
                    assert_eq!(
                        fast, reference,
                        "{arch} step {step} diverged on c={c} l={l} w_max={w_max} \
                         with {m} messages"
                    );
                    state = fast;
                }
            }
        }
    }
}

#[test]
fn decoder_matches_reference_on_small_shapes() {
    random_instances(&[(3, 4, 1), (3, 4, 3), (2, 7, 2), (4, 5, 5)], 250, 11);
}

#[test]
fn decoder_matches_reference_across_word_boundaries() {
    // n = 64 exactly, n = 69 (two activation words), and a 3-bit weight row
    random_instances(&[(4, 16, 1), (3, 23, 3), (2, 33, 7)], 120, 23);
}
