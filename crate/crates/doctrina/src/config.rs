use doctrina_core::logic::SaturationBudget;

/// Bounds and output options shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    /// Term depth for witnesses and arrows.
    pub depth: usize,
    pub budget: SaturationBudget,
    /// Largest carrier in model enumeration.
    pub model_size: usize,
    /// Refuse model enumeration beyond this many bits of table contents.
    pub max_table_bits: u32,
    pub json: bool,
    pub seed: u64,
    /// Check proved sequents in every enumerated model of the theory.
    pub validate: bool,
}

pub const TABLE_BITS_VAR: &str = "DOCTRINA_MAX_TABLE_BITS";

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            depth: 4,
            budget: SaturationBudget::default(),
            model_size: 3,
            max_table_bits: 20,
            json: false,
            seed: 0,
            validate: false,
        }
    }
}
