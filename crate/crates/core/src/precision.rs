use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Starting precision and the cap for automatic precision doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: DEFAULT_BITS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl Precision {
    pub fn new(start_bits: u32, max_bits: u32) -> Self {
        Precision {
            start_bits: start_bits.max(8),
            max_bits: max_bits.max(start_bits.max(8)),
        }
    }

    /// Runs `op` at increasing precision until it stops reporting an
    /// undecided comparison. Returns the result and the precision used.
    pub fn escalate<T>(&self, mut op: impl FnMut(u32) -> Result<T>) -> Result<(T, u32)> {
        let mut bits = self.start_bits;
        loop {
            match op(bits) {
                Ok(v) => return Ok((v, bits)),
                Err(e) if e.is_precision_limited() => {
                    if bits >= self.max_bits {
                        let reason = match e {
                            Error::Undecided(r) => r,
                            _ => "ambiguous enclosure",
                        };
                        return Err(Error::PrecisionExhausted { bits, reason });
                    }
                    bits = (bits * 2).min(self.max_bits);
                }
                Err(e) => return Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_until_decided() {
        let p = Precision::new(16, 256);
        let mut seen = vec![];
        let (v, bits) = p
            .escalate(|b| {
                seen.push(b);
                if b < 100 {
                    Err(Error::Undecided("test"))
                } else {
                    Ok(b)
                }
            })
            .unwrap();
        assert_eq!(v, 128);
        assert_eq!(bits, 128);
        assert_eq!(seen, vec![16, 32, 64, 128]);
    }

    #[test]
    fn surfaces_exhaustion() {
        let p = Precision::new(16, 64);
        let r: Result<((), u32)> = p.escalate(|_| Err(Error::Undecided("never")));
        assert_eq!(
            r.unwrap_err(),
            Error::PrecisionExhausted {
                bits: 64,
                reason: "never"
            }
        );
    }

    #[test]
    fn other_errors_pass_through() {
        let p = Precision::default();
        let r: Result<((), u32)> = p.escalate(|_| Err(Error::Domain("x".into())));
        assert_eq!(r.unwrap_err(), Error::Domain("x".into()));
    }
}
