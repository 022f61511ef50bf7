use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
#[error("invalid search parameter: {0}")]
pub struct ParamsError(pub String);

/// Which adjust-phase sequence seeds the local search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LocalSearchSeed {
    /// The last accepted sequence.
    #[default]
    Middle,
    /// The sequence with the smallest observed distance.
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// Suboptimal list size requested from the oracle while adjusting.
    pub n_suboptimal: usize,
    /// `None` means `ceil(sqrt(n) / 2)`.
    pub adjust_rounds: Option<usize>,
    pub distance_window: usize,
    pub step3_retries: usize,
    pub uphill_probability: f64,
    /// Phase-I runs per interval = multiplier × interval length.
    pub budget_multiplier: usize,
    pub seed: u64,
    pub local_search_seed: LocalSearchSeed,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            n_suboptimal: 50,
            adjust_rounds: None,
            distance_window: 5,
            step3_retries: 5,
            uphill_probability: 0.1,
            budget_multiplier: 10,
            seed: 0,
            local_search_seed: LocalSearchSeed::Middle,
        }
    }
}

impl SearchParams {
    pub fn with_seed(seed: u64) -> Self {
        SearchParams {
            seed,
            ..Default::default()
        }
    }

    pub fn rounds_for(&self, n: usize) -> usize {
        self.adjust_rounds.unwrap_or_else(|| default_rounds(n))
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let positive = [
            ("N", self.n_suboptimal),
            ("distance_window", self.distance_window),
            ("budget_multiplier", self.budget_multiplier),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ParamsError(format!("{name} must be positive")));
            }
        }
        if self.adjust_rounds == Some(0) {
            return Err(ParamsError("adjust_rounds must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.uphill_probability) {
            return Err(ParamsError(format!(
                "uphill probability {} is outside [0, 1]",
                self.uphill_probability
            )));
        }
        Ok(())
    }
}

/// `ceil(sqrt(n) / 2)`, at least 1.
pub fn default_rounds(n: usize) -> usize {
    // smallest r with 2r >= sqrt(n), i.e. 4r^2 >= n
    let mut r = 1;
    while 4 * r * r < n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_round_up() {
        assert_eq!(default_rounds(1), 1);
        assert_eq!(default_rounds(4), 1);
        assert_eq!(default_rounds(5), 2);
        assert_eq!(default_rounds(16), 2);
        assert_eq!(default_rounds(17), 3);
        assert_eq!(default_rounds(30), 3);
        assert_eq!(default_rounds(76), 5);
        for n in 1..500usize {
            assert_eq!(
                default_rounds(n),
                ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize
            );
        }
    }

    #[test]
    fn validation() {
        assert!(SearchParams::default().validate().is_ok());
        let p = SearchParams {
            uphill_probability: 1.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = SearchParams {
            n_suboptimal: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
