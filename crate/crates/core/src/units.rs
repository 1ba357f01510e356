//! dB / linear conversions used throughout the simulator.

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn roundtrip() {
        assert_relative_eq!(dbm_to_watts(30.0), 1.0);
        assert_relative_eq!(watts_to_dbm(1.0), 30.0);
        assert_relative_eq!(db_to_linear(-34.0), 10f64.powf(-3.4));
        assert_relative_eq!(linear_to_db(db_to_linear(-78.3)), -78.3, epsilon = 1e-12);
    }
}
