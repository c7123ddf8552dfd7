//! Relative Cayley graphs: d_H, nearest point projections and the
//! hyperbolic embedding certificate for a free product and a direct product.

use grpact::group::{Group, Side, SubgroupEmbedding};
use grpact::relative::{hyperbolic_embedding_certificate, RelativeSetup};

fn main() -> grpact::Result<()> {
    let f2 = Group::free(2);
    let a = SubgroupEmbedding::free_letters(&f2, &[0])?;
    let free = RelativeSetup::new(&f2, vec![f2.element("b")?], vec![a])?;
    let ball = free.build_ball(3, 4, 1_000_000)?;
    let id = f2.identity();
    println!("free product ball: {} vertices", ball.len());
    println!("d_H(1, a) = {}", ball.d_lambda(0, &id, &f2.element("a")?)?.value);
    let pts: Vec<_> = ["b", "a^2 b", "b a"].iter().map(|w| f2.element(w)).collect::<Result<_, _>>()?;
    for (p, pr) in pts.iter().zip(ball.project(0, &pts)) {
        println!("pi({p}) = {}", pr.image);
    }
    let cert = hyperbolic_embedding_certificate(&free, 3, &[3, 6, 9], 1_000_000)?;
    println!("free product: {:?} (delta {})", cert.verdict, cert.delta.delta);

    let z2 = Group::direct_product(Group::free(1), Group::free(1));
    let h = SubgroupEmbedding::factor(&z2, Side::Left)?;
    let direct = RelativeSetup::new(&z2, vec![z2.element("b")?], vec![h])?;
    let cert = hyperbolic_embedding_certificate(&direct, 3, &[4, 8, 12], 1_000_000)?;
    for t in &cert.tables {
        println!("cap {:>2}: d_H-ball counts {:?}", t.letter_cap, t.counts);
    }
    println!("direct product: {:?} at (lambda, r) = {:?}", cert.verdict, cert.witnesses);
    Ok(())
}
