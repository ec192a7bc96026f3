//! Polar codes with cycle-accurate partial-sums units.
//!
//! The crate covers code construction ([`code`]), three equivalent encoders
//! ([`encoder`]), the clock schedule of a line successive-cancellation
//! decoder ([`schedule`]), partial-sums unit models ([`psu`]), the min-sum
//! decoder itself ([`decoder`]), seeded channels ([`channel`]), gate-count
//! estimates ([`hw_cost`]) and a Monte-Carlo harness ([`sim`]).
//!
//! ```
//! use polar_psu::{code::PolarCode, decoder::ScDecoder, encoder, psu::{AnyPsu, PsuArch}};
//!
//! let code = PolarCode::bec(3, 4, 0.5).unwrap();
//! let u = encoder::expand(&code, &"1011".parse().unwrap()).unwrap();
//! let x = encoder::sequential_encode(&code, &u).unwrap();
//! let llrs = x.iter().map(|b| if b == 0 { 4.0 } else { -4.0 }).collect::<Vec<_>>();
//!
//! let mut psu = AnyPsu::for_code(PsuArch::Sr, &code);
//! let out = ScDecoder::new(&code).decode(&llrs.try_into().unwrap(), &mut psu).unwrap();
//! assert_eq!(out.info_hat.to_string(), "1011");
//! ```

pub mod bits;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod encoder;
mod error;
pub mod hw_cost;
pub mod psu;
pub mod schedule;
pub mod sim;
pub mod vectors;

pub use bits::{BitMatrix, BitVec};
pub use code::PolarCode;
pub use error::{Error, Result};
