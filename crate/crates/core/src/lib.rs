/*!
Boolean one-dimensional TQFTs with defects built from automata.

A finite automaton `M` determines a functor from oriented 1-cobordisms with
letter-labelled defects to Boolean semimodules: strands go to `B^Q`, a
defect labelled `a` goes to the transition operator `T_a`, and a closed
floating line labelled `w` evaluates to `[[1]]` exactly when `M` accepts `w`.
The crate implements that functor together with the surrounding machinery:
transducers acting on automata, spans and naturality checks, subregular
factor analysis, categorical automata over free categories, and operadic
(context-free) generalisations built from spliced arrows.
*/

pub mod automata;
pub mod boolsemi;
pub mod budget;
pub mod catauto;
pub mod cobordism;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod operad;
pub mod oracle;
pub mod par;
pub mod subregular;
pub mod suite;
pub mod tqft;
pub mod transducer;

pub use error::{Error, Result};
