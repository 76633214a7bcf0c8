fn main() {
    let table = weylsum::transforms::BesselTable::build(11, 400.0);
    let mut x = 0.01;
    let mut worst = (0.0f64, 0.0f64);
    while x < 400.0 {
        let d = (table.eval(x) - weylsum::transforms::bessel_j(11, x)).abs();
        if d > worst.0 { worst = (d, x); }
        x += 0.379;
    }
    println!("worst abs err {:e} at x = {}", worst.0, worst.1);
}
