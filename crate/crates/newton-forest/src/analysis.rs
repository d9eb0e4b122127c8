//! The full pipeline on one tree, bundled so later stages can read every ledger.

use num_bigint::BigInt;

use crate::characteristic::{characteristic_numbers, CharacteristicTable};
use crate::error::AnalysisError;
use crate::local::{global_check, vertex_ledger, LocalLedger};
use crate::multiplicity::{classify, multiplicities, DicriticalInfo, MultiplicityTable};
use crate::structure::{comb_decomposition, structure_ledger, CombDecomposition, StructureLedger};
use crate::tree::{validate_axioms, CellRef, Tree};

/// Every ledger computed for a tree. Fields are public so tests can corrupt them on purpose.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub tree: Tree,
    pub multiplicities: MultiplicityTable,
    pub info: DicriticalInfo,
    pub ledger: LocalLedger,
    pub table: CharacteristicTable,
    pub structure: StructureLedger,
    /// One decomposition per initial vertex, or only the requested one.
    pub decompositions: Vec<CombDecomposition>,
}

impl Analysis {
    pub fn delta_tilde(&self) -> &BigInt {
        &self.ledger.delta_tilde_total
    }

    pub fn decomposition(&self, z: CellRef) -> Option<&CombDecomposition> {
        self.decompositions.iter().find(|d| d.z == z)
    }
}

/// Runs every stage, decomposing at each initial vertex.
pub fn analyze(tree: Tree) -> Result<Analysis, AnalysisError> {
    analyze_at(tree, None)
}

/// Like [`analyze`], but decomposes only at `z` when given.
pub fn analyze_at(tree: Tree, z: Option<CellRef>) -> Result<Analysis, AnalysisError> {
    let diagnostics = validate_axioms(&tree);
    if !diagnostics.is_empty() {
        return Err(AnalysisError::Invalid(diagnostics));
    }
    let multiplicities = multiplicities(&tree);
    let info = classify(&tree, &multiplicities);
    let ledger = vertex_ledger(&tree, &multiplicities, &info)?;
    global_check(&ledger, &multiplicities)?;
    let table = characteristic_numbers(&tree, &ledger)?;
    let structure = structure_ledger(&tree, &ledger, &table)?;
    let chosen: Vec<CellRef> = match z {
        Some(z) => vec![z],
        None => structure.initial.iter().copied().collect(),
    };
    let decompositions = chosen
        .into_iter()
        .map(|z| comb_decomposition(&tree, &ledger, &table, &structure, z))
        .collect::<Result<_, _>>()?;
    Ok(Analysis { tree, multiplicities, info, ledger, table, structure, decompositions })
}
