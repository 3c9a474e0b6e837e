use hexcurve::plane::*;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let m = random_model(5, 12347, 42, 20);
    println!("k=5 model: {:?} in {:.2?}", m.as_ref().map(|x| x.pencils.len()), t.elapsed());
    let t = Instant::now();
    let m = random_model(10, 12347, 42, 20);
    println!("k=10 model: {:?} in {:.2?}", m.as_ref().map(|x| x.pencils.len()), t.elapsed());
}
