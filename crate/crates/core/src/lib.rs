//! Exact, desk-scale experiments on growth in `SL_n(F_q)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`finfield`]: arithmetic over `F_p` and `F_{p^2}`;
//! * [`matgroup`]: elements, keys, enumeration, sampling, centralizers and tori;
//! * [`approxgrp`]: product sets, tripling, approximate-group and control
//!   certificates, growth iteration and the Gowers test;
//! * [`varieties`]: membership predicates for standard subvarieties and the
//!   intersection/torus statistics built on them;
//! * [`sumprod`]: sum-product experiments and the `SL_2` lift;
//! * [`cayley`]: ball profiles, diameters, girth and scaling fits.

pub mod approxgrp;
pub mod cayley;
pub mod error;
pub mod finfield;
pub mod matgroup;
pub mod rng;
pub mod stats;
pub mod sumprod;
pub mod varieties;

pub use error::{Error, Result};
pub use finfield::{FieldCtx, Fq, Square};
pub use matgroup::{Elem, ElemKey, ElemSet, GroupCtx, StdVariety, TorusId};
