//! Values published for the case studies, kept separate from anything the
//! code computes so that comparisons can never silently substitute one for
//! the other.

/// Claims made about one case study. `None` where nothing was stated.
#[derive(Debug, Clone, Copy)]
pub struct PublishedClaims {
    pub tag: &'static str,
    /// Stated virtual aperture (the coarray "extends from −a to a").
    pub virtual_aperture: Option<i64>,
    /// Stated central segment half-width.
    pub segment_half_width: Option<i64>,
    pub hole_free: Option<bool>,
    /// Number of sources the array is said to resolve (and the count used
    /// in the MUSIC experiment).
    pub max_sources: usize,
    pub rmse: f64,
    pub table: TableRow,
}

/// One row of the robustness table.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub name: &'static str,
    pub essential: &'static [i64],
    /// Fragilities `F_1, F_2, …` in units of 1e-4.
    pub fragility: &'static [u64],
}

pub const NFA: PublishedClaims = PublishedClaims {
    tag: "nfa",
    virtual_aperture: Some(24),
    segment_half_width: Some(24),
    hole_free: Some(true),
    max_sources: 24,
    rmse: 0.0014,
    table: TableRow {
        name: "NFA",
        essential: &[1, 2, 3, 4, 17, 21, 25],
        fragility: &[5833, 8788, 9909],
    },
};

pub const CFA: PublishedClaims = PublishedClaims {
    tag: "cfa",
    virtual_aperture: Some(24),
    segment_half_width: Some(22),
    hole_free: Some(true),
    max_sources: 22,
    rmse: 0.0027,
    table: TableRow {
        name: "CFA",
        essential: &[0, 2, 4, 9, 17, 22],
        fragility: &[5000, 8182, 9727],
    },
};

pub const AUGGENIFA: PublishedClaims = PublishedClaims {
    tag: "auggen1",
    virtual_aperture: Some(26),
    segment_half_width: None,
    hole_free: None,
    max_sources: 26,
    rmse: 0.00156,
    table: TableRow {
        name: "AUGGENIFA",
        essential: &[1, 4, 8, 12, 17, 21, 25, 26, 27],
        fragility: &[8182, 10000],
    },
};

pub const AUGGENIIFA: PublishedClaims = PublishedClaims {
    tag: "auggen2",
    virtual_aperture: None,
    segment_half_width: None,
    hole_free: None,
    max_sources: 26,
    rmse: 0.00127,
    table: TableRow {
        name: "AUGGENIIFA",
        essential: &[1, 2, 3, 4, 17, 21, 25],
        fragility: &[5833, 8788, 9909],
    },
};

pub const SNFA: PublishedClaims = PublishedClaims {
    tag: "snfa",
    virtual_aperture: None,
    segment_half_width: None,
    hole_free: None,
    max_sources: 25,
    rmse: 0.00174,
    table: TableRow {
        name: "SNFA",
        essential: &[1, 3, 6, 8, 11, 12, 21, 24, 25],
        fragility: &[7500, 10000],
    },
};

pub const ALL: [PublishedClaims; 5] = [NFA, CFA, AUGGENIFA, AUGGENIIFA, SNFA];

pub fn by_tag(tag: &str) -> Option<&'static PublishedClaims> {
    ALL.iter().find(|c| c.tag == tag)
}
