//! Connected labeled graphs and the graph-sum bound on truncated
//! correlation functions.

use debye_screen::decay::{enumerate_connected_graphs, exponential_envelope, graph_bound, Regime, SpacetimePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 2..=5 {
        let graphs = enumerate_connected_graphs(k)?;
        println!("k = {k}: {} connected graphs", graphs.len());
    }
    let graphs = enumerate_connected_graphs(3)?;
    for scale in [1.0, 2.0, 4.0, 8.0] {
        let points = [
            SpacetimePoint::spatial([scale, 0.0, 0.0]),
            SpacetimePoint::spatial([0.0, scale, 0.5 * scale]),
        ];
        let massive = graph_bound(&points, 1.0, &graphs, Regime::ThermalSpatial)?;
        let massless = graph_bound(&points, 0.0, &graphs, Regime::ThermalSpatial)?;
        println!(
            "scale {scale}: massive {massive:.4e} (envelope {:.4e}), massless {massless:.4e}",
            exponential_envelope(&points, 1.0)
        );
    }
    Ok(())
}
