//! Quaternion scalar arithmetic: Hamilton rules, non-commutativity, the
//! Cayley-Dickson form, and the pure-quaternion RGB pixel encoding.

use qtlr::quat::{qmul, Quaternion};

fn main() {
    // Hamilton rules: i^2 = j^2 = k^2 = ijk = -1.
    println!("i * i = {:?}", qmul(Quaternion::I, Quaternion::I));
    println!("i * j = {:?}", qmul(Quaternion::I, Quaternion::J));
    println!("j * i = {:?}  (multiplication is not commutative)", qmul(Quaternion::J, Quaternion::I));

    let a = Quaternion::new(1.0, 2.0, -1.0, 0.5);
    let b = Quaternion::new(0.0, 1.0, 1.0, -2.0);
    println!("\na       = {a:?}");
    println!("b       = {b:?}");
    println!("a * b   = {:?}", qmul(a, b));
    println!("b * a   = {:?}", qmul(b, a));
    println!("|a|     = {:.6}", a.modulus());
    println!("conj(a) = {:?}", a.conj());
    // |a|^2 = a * conj(a) (a real number).
    println!("a*conj(a) = {:?}", qmul(a, a.conj()));

    // Cayley-Dickson: q = alpha + beta j with complex alpha, beta. This is
    // the bridge to the complex-adjoint matrix representation used by the
    // QSVD.
    let (alpha, beta) = a.cayley_dickson();
    println!("\nCayley-Dickson of a: alpha = {alpha}, beta = {beta}");
    assert_eq!(Quaternion::from_cayley_dickson(alpha, beta), a);

    // An RGB pixel as a pure quaternion: R -> i, G -> j, B -> k. The real
    // part stays zero, so one quaternion entry carries a full color pixel.
    let pixel = Quaternion::new(0.0, 255.0, 128.0, 64.0);
    println!("\npixel (R=255, G=128, B=64) = {pixel:?}, pure: {}", pixel.is_pure());
    println!("unit direction of pixel    = {:?}", pixel.sign());
}
