//! Internal-bundle relations and independence from the choice of frame.
//!
//! `cargo run --example bundle_and_frames`

use hrel::catalog::{self, intrinsic, Spin, ROTATION_PAIRS};
use hrel::verify::{random_frame, verify_frame_independence, verify_local, Intrinsics, LocalTarget, Mode, RelationSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for spin in Spin::ALL {
        let (_, d) = catalog::poincare(spin).expect("catalog loads");
        let spec = RelationSpec::new(format!("bundle-{}", spin.name()), Mode::Bundle).degree(3);
        let target = LocalTarget::new(None, d).intrinsics(Intrinsics::Poincare(spin));
        let bundle = verify_local(&spec, &target).expect("bundle relation runs");
        let changes: Vec<_> = (0..5).map(|_| random_frame(spin.dim(), &mut rng)).collect();
        let intr: Vec<_> = ROTATION_PAIRS.iter().map(|&(m, n)| (format!("w{m}{n}"), intrinsic(spin, m, n))).collect();
        let frames = verify_frame_independence(&spec, &intr, &changes, 10, 42).expect("frame check runs");
        println!(
            "{}: bundle max residual {:.2e}, frame max residual {:.2e}",
            spin.name(),
            bundle.max_residual(),
            frames.max_residual()
        );
    }
}
