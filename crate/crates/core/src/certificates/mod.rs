//! Obstruction certificates (strong shelters, LIFO-havens) and searcher
//! scripts built from elimination forests.

mod haven;
mod script;
mod shelter;

pub use haven::{
    build_haven, haven_domain, haven_to_fugitive_strategy, shelter_to_haven, verify_haven, HavenEntry, HavenError,
    HavenFugitive, LifoHaven,
};
pub use script::synthesize_search_script;
pub use shelter::{build_shelter, build_shelter_with, verify_shelter, ShelterError, StrongShelter};
