//! Aggregation of member contributions along a path.
//!
//! The four aggregators are generic over any floating-point scalar; the
//! [`Aggregator`] dispatcher works on `f64`. Every aggregator maps the empty
//! sequence to 0.

use std::fmt;
use std::sync::Arc;

use num_traits::Float;

use crate::error::AggError;

pub fn agg_sum<T: Float>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &x| acc + x)
}

pub fn agg_avg<T: Float>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::zero();
    }
    agg_sum(xs) / T::from(xs.len()).expect("length fits the scalar")
}

pub fn agg_max<T: Float>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &x| acc.max(x))
}

/// 1 − Π(1 − xₖ).
pub fn agg_mprod<T: Float>(xs: &[T]) -> T {
    T::one() - xs.iter().fold(T::one(), |acc, &x| acc * (T::one() - x))
}

pub type ExternalAggregator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Aggregator {
    Sum,
    Avg,
    Max,
    MProd,
    /// A user-supplied function; `proper` declares that it always lands in [0, 1].
    External {
        name: String,
        f: ExternalAggregator,
        proper: bool,
    },
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Aggregator {
    pub const BUILTIN: [Aggregator; 4] = [Aggregator::Sum, Aggregator::Avg, Aggregator::Max, Aggregator::MProd];

    pub fn external(name: &str, proper: bool, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Aggregator::External {
            name: name.to_string(),
            f: Arc::new(f),
            proper,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Aggregator::Sum => "sum",
            Aggregator::Avg => "avg",
            Aggregator::Max => "max",
            Aggregator::MProd => "mprod",
            Aggregator::External { name, .. } => name,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sum" => Some(Aggregator::Sum),
            "avg" => Some(Aggregator::Avg),
            "max" => Some(Aggregator::Max),
            "mprod" => Some(Aggregator::MProd),
            _ => None,
        }
    }

    /// Whether outputs are guaranteed to stay in [0, 1]. The sum is not.
    pub fn is_proper(&self) -> bool {
        match self {
            Aggregator::Sum => false,
            Aggregator::External { proper, .. } => *proper,
            _ => true,
        }
    }

    pub fn apply(&self, xs: &[f64]) -> Result<f64, AggError> {
        let y = match self {
            Aggregator::Sum => agg_sum(xs),
            Aggregator::Avg => agg_avg(xs),
            Aggregator::Max => agg_max(xs),
            Aggregator::MProd => agg_mprod(xs),
            Aggregator::External { f, .. } => f(xs),
        };
        if self.is_proper() && !(0.0..=1.0).contains(&y) {
            return Err(AggError::CodomainViolation {
                name: self.name().to_string(),
                value: y,
            });
        }
        Ok(y)
    }
}
