//! Published sensor lists for the five sparse fractal case studies.
//!
//! These are kept verbatim so that generator output can be checked against
//! them; the generators themselves never read from here.

use crate::geometry::{make_sfa, SensorArray, Subarray};
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct CaseStudy {
    /// Short tag, also used by `reproduce`.
    pub tag: &'static str,
    pub name: &'static str,
    pub subarray: Subarray,
    /// Published sparse subarray (duplicates removed).
    pub subarray_positions: &'static [i64],
    /// Published sparse fractal array.
    pub positions: &'static [i64],
}

impl CaseStudy {
    /// Builds the array from its generator, labelled with the case-study name.
    pub fn build(&self) -> Result<SensorArray> {
        Ok(make_sfa(&self.subarray, 1)?.with_label(self.name))
    }

    pub fn build_subarray(&self) -> Result<SensorArray> {
        self.subarray.build()
    }
}

pub const NFA: CaseStudy = CaseStudy {
    tag: "nfa",
    name: "NFA",
    subarray: Subarray::Nested { n: 6 },
    subarray_positions: &[1, 2, 3, 4, 8, 12],
    positions: &[1, 2, 3, 4, 8, 12, 14, 15, 16, 17, 21, 25],
};

pub const CFA: CaseStudy = CaseStudy {
    tag: "cfa",
    name: "CFA",
    subarray: Subarray::Coprime { m: 2, n: 3 },
    subarray_positions: &[0, 2, 3, 4, 6, 9],
    positions: &[0, 2, 3, 4, 6, 9, 13, 15, 16, 17, 19, 22],
};

pub const AUGGENIFA: CaseStudy = CaseStudy {
    tag: "auggen1",
    name: "AUGGENIFA",
    subarray: Subarray::Ana1 { n: 6 },
    subarray_positions: &[1, 4, 8, 12, 13, 14],
    positions: &[1, 4, 8, 12, 13, 14, 17, 21, 25, 26, 27],
};

pub const AUGGENIIFA: CaseStudy = CaseStudy {
    tag: "auggen2",
    name: "AUGGENIIFA",
    subarray: Subarray::Ana2 { n: 6 },
    subarray_positions: &[1, 2, 4, 8, 12, 13],
    positions: &[1, 2, 4, 8, 12, 13, 14, 15, 17, 21, 25, 26],
};

/// The published subarray reads `[1 1 3 6 8 11 12]`; the repeated 1 is dropped.
pub const SNFA: CaseStudy = CaseStudy {
    tag: "snfa",
    name: "SNFA",
    subarray: Subarray::SuperNested { n1: 3, n2: 3 },
    subarray_positions: &[1, 3, 6, 8, 11, 12],
    positions: &[1, 3, 6, 8, 11, 12, 14, 16, 19, 21, 24, 25],
};

pub const CASE_STUDIES: [CaseStudy; 5] = [NFA, CFA, AUGGENIFA, AUGGENIIFA, SNFA];

pub fn by_tag(tag: &str) -> Option<&'static CaseStudy> {
    CASE_STUDIES.iter().find(|c| c.tag == tag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_reproduce_published_lists() {
        for case in CASE_STUDIES {
            assert_eq!(
                case.build_subarray().unwrap().positions(),
                case.subarray_positions,
                "{} subarray",
                case.name
            );
            let sfa = case.build().unwrap();
            assert_eq!(sfa.positions(), case.positions, "{}", case.name);
            assert_eq!(sfa.label(), case.name);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(by_tag("cfa").unwrap().name, "CFA");
        assert!(by_tag("mra").is_none());
    }
}
