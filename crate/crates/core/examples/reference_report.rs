//! Prints the bounds of the reference deployment for the three designs.

use starloc_core::fim::{evaluate, PARAMETER_NAMES};
use starloc_core::starris::make_design;
use starloc_core::{DesignKind, Model};

fn main() -> starloc_core::Result<()> {
    for (kind, seed) in [
        (DesignKind::Dft, 0),
        (DesignKind::Hadamard, 0),
        (DesignKind::Random, 1),
    ] {
        let mut model = Model::reference();
        model.profiles = make_design(kind, 64, 128, seed)?;
        let report = evaluate(&model)?;
        println!("{kind}: cond(J) = {:.3e}", report.condition_number);
        for (name, v) in PARAMETER_NAMES.iter().zip(report.channel_crlb.iter()) {
            println!("  crlb {name:>6} = {v:.6e}");
        }
        println!(
            "  rmse outdoor = {:.6e} m, indoor = {:.6e} m",
            report.rmse_outdoor, report.rmse_indoor
        );
    }
    Ok(())
}
