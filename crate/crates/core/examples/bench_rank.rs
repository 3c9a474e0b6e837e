use hexcurve::{FpCtx, FpMatrix};
use hexcurve::rng::Rng;
use std::time::Instant;

fn main() {
    let ctx = FpCtx::new(12347);
    let mut rng = Rng::new(1);
    for (r, c) in [(2000usize, 1500usize), (9900, 5082), (20790, 3918)] {
        let m = FpMatrix::random(&mut rng, &ctx, r, c);
        let t = Instant::now();
        let rank = m.rank(&ctx);
        println!("{}x{}: rank {} in {:.2?}", r, c, rank, t.elapsed());
    }
}
