//! Bundled example configurations.

use cre_core::lie::presets::{ALGEBRA_PRESETS, AUTOMORPHISM_PRESETS};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

macro_rules! acceptance_preset {
    ($id:literal, $summary:literal) => {
        Preset {
            name: $id,
            summary: $summary,
            toml: concat!("kind = \"acceptance\"\nseed = 20241\n\n[acceptance]\ncriteria = [\"", $id, "\"]\n"),
        }
    };
}

/// Listing order is the order of this table.
pub const PRESETS: &[Preset] = &[
    acceptance_preset!("ac01", "reflection equation for the Cartan involution on sl2..sl5"),
    acceptance_preset!("ac02", "CYBE and mCYBE for the standard sl2, sl3 r-matrices"),
    acceptance_preset!("ac03", "coideal equivalence over 200 random r tensors"),
    acceptance_preset!("ac04", "Toda n = 4 commutativity and gradient rank"),
    acceptance_preset!("ac05", "kappa calibration and factorization against RK4"),
    acceptance_preset!("ac06", "isospectrality of the n = 3 Toda flow on [0, 10]"),
    acceptance_preset!("ac07", "Laurent unitarity of the XXZ Lax matrix"),
    acceptance_preset!("ac08", "Sklyanin bracket and two-site reflection algebra"),
    acceptance_preset!("ac09", "commuting transfer matrices, three sites"),
    acceptance_preset!("ac10", "product formula and the local-Hamiltonian flow"),
    acceptance_preset!("ac11", "semiclassical limit of the six-vertex R-matrix"),
    Preset {
        name: "sl2",
        summary: "Lie checks on sl2 with the Cartan involution",
        toml: "kind = \"verify_lie\"\nseed = 1\n\n[lie]\nalgebra = \"sl2\"\nautomorphism = \"cartan\"\nmcybe_pairs = 100\n",
    },
    Preset {
        name: "sl3",
        summary: "Lie checks on sl3 with the Cartan involution",
        toml: "kind = \"verify_lie\"\nseed = 1\n\n[lie]\nalgebra = \"sl3\"\nautomorphism = \"cartan\"\nmcybe_pairs = 100\n",
    },
    Preset {
        name: "toda_coxeter",
        summary: "open Coxeter-Toda lattice, n = 2, flow of tr T",
        toml: "kind = \"toda\"\nseed = 7\n\n[toda]\nn = 2\nscale = 0.5\nm = 1\nt_final = 2.0\ndt = 0.005\n",
    },
    Preset {
        name: "gl2_loop_xxz",
        summary: "three-site classical XXZ chain with reflecting ends, local Hamiltonian flow",
        toml: "kind = \"xxz\"\nseed = 3\n\n[xxz]\nsites = 3\nt = 2.0\nxi_plus = 2.0\nxi_minus = 2.0\nt_final = 5.0\ndt = 0.002\ntau_points = [0.7, 1.3, 1.9]\n",
    },
];

pub fn preset(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))
}

pub fn load(name: &str) -> Result<ExperimentConfig, CliError> {
    ExperimentConfig::parse(preset(name)?.toml)
}

pub fn listing() -> String {
    let mut out = String::new();
    out.push_str("algebras:\n");
    for a in ALGEBRA_PRESETS {
        out.push_str(&format!("  {a}\n"));
    }
    out.push_str("automorphisms:\n");
    for a in AUTOMORPHISM_PRESETS {
        out.push_str(&format!("  {a}\n"));
    }
    out.push_str("configs:\n");
    for p in PRESETS {
        out.push_str(&format!("  {:<14}{}\n", p.name, p.summary));
    }
    out
}
