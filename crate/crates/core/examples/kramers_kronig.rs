//! Builds ε(iξ) from a sampled absorption spectrum and checks it against the
//! closed form of the oscillator that produced it.

use casimir::materials::KkTable;

fn main() -> casimir::Result<()> {
    let (g, w0, gamma) = (1.0, 5.0, 0.5);
    let absorption = |w: f64| {
        let d = 1.0 - (w / w0).powi(2);
        let e = gamma * w / (w0 * w0);
        g * e / (d * d + e * e)
    };
    let table = KkTable::sample(absorption, 0.01, 1e4, 4000, 3.0)?;

    println!("{:>10} {:>14} {:>14} {:>12} {:>12}", "xi (eV)", "kk", "exact", "tail", "omitted");
    for xi in [0.1, 1.0, 5.0, 20.0, 100.0] {
        let t = table.transform(xi)?;
        let exact = 1.0 + g / (1.0 + (xi / w0).powi(2) + gamma * xi / (w0 * w0));
        println!("{xi:>10.2} {:>14.8} {exact:>14.8} {:>12.3e} {:>12.3e}", t.value, t.tail, t.omitted_bound);
    }
    Ok(())
}
