//! The verification suites behind `verify`. Each suite owns its workspaces, so suites
//! can run on separate threads.

use std::str::FromStr;

use ramop_core::bidegree::DimTable;
use ramop_core::component::OperadWorkspace;
use ramop_core::cooperad::cooperad_checks;
use ramop_core::dual::{compat_checks, conjecture_verdict, dual_associativity, DualWorkspace};
use ramop_core::forms::forms_checks;
use ramop_core::graph::{self, GraphWorkspace, Mode};
use ramop_core::ram::{self, distributive_check, hopf_check, Which};
use ramop_core::ramanujan::predicted_dims;
use ramop_core::report::{Check, SuiteReport};
use ramop_core::{Error, Limits, Result};

use crate::cache::Cache;

/// Largest `n` for the checks that pair `ρ` against products in `R`.
pub const COMPAT_MAX_N: usize = 3;
pub const FORMS_TRIALS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Hopf,
    Differentials,
    Cooperad,
    Lemmas,
    Forms,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Hopf, Suite::Differentials, Suite::Cooperad, Suite::Lemmas, Suite::Forms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Differentials => "differentials",
            Suite::Cooperad => "cooperad",
            Suite::Lemmas => "lemmas",
            Suite::Forms => "forms",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

/// Workspace factory that reads and writes the component cache.
#[derive(Clone, Debug)]
pub struct Context {
    pub limits: Limits,
    pub cache: Option<Cache>,
    pub seed: u64,
}

impl Context {
    pub fn operad(&self, which: Which, n: usize) -> OperadWorkspace {
        let mut ws = ram::workspace(which, self.limits);
        if let Some(c) = &self.cache {
            c.load_operad(&mut ws, n);
        }
        ws
    }

    pub fn graph(&self, mode: Mode, n: usize) -> GraphWorkspace {
        let mut ws = GraphWorkspace::r(mode, self.limits);
        if let Some(c) = &self.cache {
            c.load_graph(&mut ws, n);
        }
        ws
    }

    pub fn dual(&self, n: usize) -> DualWorkspace {
        let mut dw = DualWorkspace::new(self.limits);
        if let Some(c) = &self.cache {
            c.load_graph(&mut dw.r, n);
            c.load_operad(&mut dw.ram, n);
        }
        dw
    }

    /// Cache write failures are reported on stderr and otherwise ignored.
    pub fn keep_operad(&self, ws: &OperadWorkspace) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.store_operad(ws) {
                eprintln!("warning: cache write failed in {}: {e}", c.dir.display());
            }
        }
    }

    pub fn keep_graph(&self, ws: &GraphWorkspace) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.store_graph(ws) {
                eprintln!("warning: cache write failed in {}: {e}", c.dir.display());
            }
        }
    }

    pub fn keep_dual(&self, dw: &DualWorkspace) {
        self.keep_graph(&dw.r);
        self.keep_operad(&dw.ram);
    }

    pub fn run(&self, suite: Suite, n: usize) -> Result<Vec<SuiteReport>> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        self.limits.check_arity(n, format!("suite {}", suite.name()))?;
        match suite {
            Suite::Hopf => self.hopf(n),
            Suite::Differentials => self.differentials(n),
            Suite::Cooperad => self.cooperad(n),
            Suite::Lemmas => self.lemmas(n),
            Suite::Forms => Ok(vec![forms_checks(n, FORMS_TRIALS, self.seed)?]),
        }
    }

    fn compat(&self, n: usize, keep: impl Fn(&Check) -> bool) -> Result<SuiteReport> {
        let m = n.min(COMPAT_MAX_N);
        let mut dw = self.dual(m);
        let mut r = compat_checks(&mut dw, m)?;
        self.keep_dual(&dw);
        r.checks.retain(|c| keep(c));
        Ok(r)
    }

    fn hopf(&self, n: usize) -> Result<Vec<SuiteReport>> {
        let mut ws = self.operad(Which::Ram, n);
        let h = hopf_check(&mut ws, n)?;
        self.keep_operad(&ws);
        Ok(vec![h, self.compat(n, |c| c.name.contains("coalgebra"))?])
    }

    fn differentials(&self, n: usize) -> Result<Vec<SuiteReport>> {
        let mut ws = self.operad(Which::Ram, n);
        let a = ram::differential_checks(&mut ws, n)?;
        self.keep_operad(&ws);
        let mut gs = self.graph(Mode::Forest, n);
        let b = graph::differential_checks(&mut gs, n)?;
        self.keep_graph(&gs);
        Ok(vec![a, b, self.compat(n, |c| c.name.contains("intertwines"))?])
    }

    fn cooperad(&self, n: usize) -> Result<Vec<SuiteReport>> {
        let mut gs = self.graph(Mode::Forest, n);
        let a = cooperad_checks(&mut gs, n)?;
        self.keep_graph(&gs);
        let mut dw = self.dual(n);
        let mut b = SuiteReport::new("dual operad", n);
        b.push(dual_associativity(&mut dw, n)?);
        for k in 1..=n {
            let mut c = conjecture_verdict(&mut dw, k)?.well_defined;
            c.name = format!("{} (|I|={k})", c.name);
            b.push(c);
        }
        self.keep_dual(&dw);
        Ok(vec![a, b])
    }

    fn lemmas(&self, n: usize) -> Result<Vec<SuiteReport>> {
        let a = graph::lemma_checks(self.limits, n)?;
        let mut b = SuiteReport::new("dimensions", n);
        let mut ramws = self.operad(Which::Ram, n);
        let mut rws = self.graph(Mode::Forest, n);
        let mut psi = Check::new("Ram dims equal Ramanujan coefficients");
        let mut dual = Check::new("R dims equal Ram dims");
        for k in 1..=n {
            let (d, p, r) = (ramws.dims(k)?, predicted_dims(k), rws.dims(k)?);
            psi.case(d == p, || format!("n={k}: Ram {d}, predicted {p}"));
            dual.case(r == d, || format!("n={k}: R {r}, Ram {d}"));
            b.table(format!("Ram({k})"), d);
        }
        b.push(psi);
        b.push(dual);
        self.keep_operad(&ramws);
        self.keep_graph(&rws);
        b.push(suboperad_check(self, Which::Poisson, n, |d| d.h == 0)?);
        b.push(suboperad_check(self, Which::Bessel, n, |d| d.h == d.w)?);
        let mut dist = Check::new("distributive law factorization");
        for k in 1..=n {
            let (c, direct, via) = distributive_check(self.limits, k)?;
            dist.case(c.passed, || format!("n={k}: direct {direct}, partitions {via}"));
        }
        b.push(dist);
        Ok(vec![a, b])
    }
}

/// Dims of a sub-operad against the slice of the Ramanujan coefficients it should carry.
pub fn suboperad_check(cx: &Context, which: Which, n: usize, slice: impl Fn(ramop_core::BiDegree) -> bool) -> Result<Check> {
    let mut ws = cx.operad(which, n);
    let mut c = Check::new(format!("{} dims equal the matching Ramanujan coefficients", which.name()));
    for k in 1..=n {
        let (d, p) = (ws.dims(k)?, predicted_dims(k).filter(&slice));
        c.case(d == p, || format!("n={k}: {} {d}, predicted {p}", which.name()));
    }
    cx.keep_operad(&ws);
    Ok(c)
}

/// Predicted table for the operads whose dims are read off the Ramanujan polynomials.
pub fn predicted_for(which: Which, n: usize) -> Option<DimTable> {
    let p = predicted_dims(n);
    match which {
        Which::Ram => Some(p),
        Which::Poisson => Some(p.filter(|d| d.h == 0)),
        Which::Bessel => Some(p.filter(|d| d.h == d.w)),
        _ => None,
    }
}
