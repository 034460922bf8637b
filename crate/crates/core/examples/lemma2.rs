//! Monte Carlo check that the six-dimensional convergence integral is
//! finite, and that dropping one decaying factor makes it grow with the
//! cutoff.

use debye_screen::decay::{divergence_control, lemma2_stability};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let st = lemma2_stability(200_000, 800_000, 7)?;
    println!(
        "n = {}: {:.5} +- {:.5}",
        st.small.samples, st.small.estimate.value, st.small.std_error
    );
    println!(
        "n = {}: {:.5} +- {:.5}",
        st.large.samples, st.large.estimate.value, st.large.std_error
    );
    println!(
        "separation {:.3} standard errors, truncation bias below {:.2e}, agree {}",
        st.separation,
        st.truncation_bias_bound,
        st.agree()
    );

    let ladder = divergence_control(&[10.0, 100.0, 1000.0], 200_000, 7)?;
    for ((r, est), exact) in ladder.radii.iter().zip(&ladder.estimates).zip(&ladder.exact) {
        println!("R = {r:>6}: {:.4e} +- {:.1e} (exact {exact:.4e})", est.estimate.value, est.std_error);
    }
    println!("grows: {}", ladder.grows());
    Ok(())
}
