use super::DistributionOracle;

/// Law of `-X` for an arbitrary oracle.
///
/// The strict/inclusive tie convention is preserved under negation:
/// `P(-X > x) = P(X < -x)`, which is why the trait carries
/// [`DistributionOracle::mass_below`].
#[derive(Debug, Clone, Copy)]
pub struct Negated<D> {
    inner: D,
}

impl<D: DistributionOracle> Negated<D> {
    pub fn new(inner: D) -> Self {
        Negated { inner }
    }

    pub fn into_inner(self) -> D {
        self.inner
    }
}

pub fn negate<D: DistributionOracle + ?Sized>(d: &D) -> Negated<&D> {
    Negated { inner: d }
}

impl<D: DistributionOracle> DistributionOracle for Negated<D> {
    fn mean(&self) -> f64 {
        -self.inner.mean()
    }

    fn upper_partial_moment(&self, x: f64) -> f64 {
        self.inner.lower_partial_moment(-x)
    }

    fn lower_partial_moment(&self, x: f64) -> f64 {
        self.inner.upper_partial_moment(-x)
    }

    fn survival(&self, x: f64) -> f64 {
        self.inner.mass_below(-x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.mass_at_or_above(-x)
    }

    fn upper_partial_expectation(&self, x: f64) -> f64 {
        -self.inner.lower_partial_expectation_strict(-x)
    }

    fn mass_below(&self, x: f64) -> f64 {
        self.inner.survival(-x)
    }

    fn mass_at_or_above(&self, x: f64) -> f64 {
        self.inner.cdf(-x)
    }

    fn lower_partial_expectation_strict(&self, x: f64) -> f64 {
        -self.inner.upper_partial_expectation(-x)
    }

    fn support_bounds(&self) -> Option<(f64, f64)> {
        self.inner.support_bounds().map(|(lo, hi)| (-hi, -lo))
    }

    fn second_partial_moments(&self, x: f64) -> Option<(f64, f64)> {
        self.inner
            .second_partial_moments(-x)
            .map(|(upper, lower)| (lower, upper))
    }
}
