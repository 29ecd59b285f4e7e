//! Deterministic generator for benchmark families covering every
//! track shape, plus hand-labeled classification fixtures.

use horn_arena::classify::TrackId;

use super::TestRng;

pub struct GeneratedBenchmark {
    pub name: String,
    pub text: String,
    pub expected_track: TrackId,
    pub queries: usize,
    /// Small enough for the finite-model oracle.
    pub oracle_eligible: bool,
}

fn lia_lin(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let start = rng.below(2);
    let step = 1 + rng.below(3);
    let bound = rng.below(8) as i64 - 1;
    let cmp = *rng.pick(&[">", ">=", "<"]);
    let queries = if rng.chance(40) { 2 } else { 1 };
    let mut text = format!(
        "(set-logic HORN)\n\
         (declare-fun inv (Int) Bool)\n\
         (assert (forall ((x Int)) (=> (= x {start}) (inv x))))\n\
         (assert (forall ((x Int) (y Int)) (=> (and (inv x) (= y (+ x {step}))) (inv y))))\n\
         (assert (forall ((x Int)) (=> (and (inv x) ({cmp} x {bound})) false)))\n"
    );
    if queries == 2 {
        let bound2 = rng.below(5) as i64;
        text.push_str(&format!(
            "(assert (forall ((x Int)) (=> (and (inv x) (< x (- {bound2}))) false)))\n"
        ));
    }
    text.push_str("(check-sat)\n");
    GeneratedBenchmark {
        name: format!("lia-lin/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::LiaLin,
        queries,
        oracle_eligible: true,
    }
}

fn lia_nonlin(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let k = rng.below(3);
    let queries = if rng.chance(40) { 2 } else { 1 };
    let mut text = format!(
        "(set-logic HORN)\n\
         (declare-fun p (Int) Bool)\n\
         (declare-fun q (Int) Bool)\n\
         (assert (forall ((x Int)) (=> (= x 0) (p x))))\n\
         (assert (forall ((x Int)) (=> (= x {k}) (q x))))\n\
         (assert (forall ((x Int) (y Int)) (=> (and (p x) (q y) (= x y)) (p y))))\n\
         (assert (forall ((x Int)) (=> (and (p x) (q x) (> x {k})) false)))\n"
    );
    if queries == 2 {
        text.push_str(
            "(assert (forall ((x Int) (y Int)) (=> (and (p x) (q y) (< (+ x y) 0)) false)))\n",
        );
    }
    text.push_str("(check-sat)\n");
    GeneratedBenchmark {
        name: format!("lia-nonlin/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::LiaNonlin,
        queries,
        oracle_eligible: true,
    }
}

fn lia_lin_arrays(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let init = rng.below(2);
    let probe = rng.below(2);
    let queries = if rng.chance(35) { 2 } else { 1 };
    let mut text = format!(
        "(set-logic HORN)\n\
         (declare-fun mem ((Array Int Int) Int) Bool)\n\
         (assert (forall ((a (Array Int Int)) (i Int)) \
           (=> (= (select a i) {init}) (mem a i))))\n\
         (assert (forall ((a (Array Int Int)) (b (Array Int Int)) (i Int)) \
           (=> (and (mem a i) (= b (store a i (+ (select a i) 1)))) (mem b i))))\n\
         (assert (forall ((a (Array Int Int)) (i Int)) \
           (=> (and (mem a i) (> (select a i) {probe}) (> 0 1)) false)))\n"
    );
    if queries == 2 {
        text.push_str(
            "(assert (forall ((a (Array Int Int)) (i Int)) \
               (=> (and (mem a i) (< (select a i) (- 5))) false)))\n",
        );
    }
    text.push_str("(check-sat)\n");
    GeneratedBenchmark {
        name: format!("lia-lin-arrays/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::LiaLinArrays,
        queries,
        oracle_eligible: false,
    }
}

fn lia_nonlin_arrays(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let k = rng.below(4);
    let text = format!(
        "(set-logic HORN)\n\
         (declare-fun r ((Array Int Int)) Bool)\n\
         (declare-fun s ((Array Int Int)) Bool)\n\
         (assert (forall ((a (Array Int Int))) (=> (= (select a 0) {k}) (r a))))\n\
         (assert (forall ((a (Array Int Int))) (=> (= (select a 1) 0) (s a))))\n\
         (assert (forall ((a (Array Int Int)) (b (Array Int Int))) \
           (=> (and (r a) (s b) (= a b)) (r (store b 0 {k})))))\n\
         (assert (forall ((a (Array Int Int))) (=> (and (r a) (s a) (> (select a 0) 7)) false)))\n\
         (check-sat)\n"
    );
    GeneratedBenchmark {
        name: format!("lia-nonlin-arrays/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::LiaNonlinArrays,
        queries: 1,
        oracle_eligible: false,
    }
}

fn lra_ts(rng: &mut TestRng, index: usize, par_flavor: bool) -> GeneratedBenchmark {
    let start = *rng.pick(&["0.0", "0.5", "1.0"]);
    let step = *rng.pick(&["0.5", "1.5", "2.5"]);
    let bound = *rng.pick(&["4.5", "9.5", "20.0"]);
    let text = format!(
        "(set-logic HORN)\n\
         (declare-fun state (Real Real) Bool)\n\
         (assert (forall ((x Real) (y Real)) (=> (and (= x {start}) (= y 0.0)) (state x y))))\n\
         (assert (forall ((x Real) (y Real) (x2 Real) (y2 Real)) \
           (=> (and (state x y) (= x2 (+ x {step})) (= y2 (+ y 1.0))) (state x2 y2))))\n\
         (assert (forall ((x Real) (y Real)) (=> (and (state x y) (> x {bound})) false)))\n\
         (check-sat)\n"
    );
    let dir = if par_flavor { "lra-ts-par" } else { "lra-ts" };
    GeneratedBenchmark {
        name: format!("{}/gen-{:03}.smt2", dir, index),
        text,
        expected_track: TrackId::LraTs,
        queries: 1,
        oracle_eligible: false,
    }
}

fn adt_nonlin(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let queries = if rng.chance(40) { 2 } else { 1 };
    let probe = if rng.chance(50) { "zero" } else { "(succ zero)" };
    let mut text = format!(
        "(set-logic HORN)\n\
         (declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))\n\
         (declare-fun le (Nat Nat) Bool)\n\
         (declare-fun eqn (Nat Nat) Bool)\n\
         (assert (forall ((n Nat)) (le zero n)))\n\
         (assert (forall ((a Nat) (b Nat)) (=> (le a b) (le (succ a) (succ b)))))\n\
         (assert (forall ((a Nat) (b Nat)) (=> (and (le a b) (le b a)) (eqn a b))))\n\
         (assert (forall ((a Nat)) (=> (and (eqn a {probe}) ((_ is succ) a) ((_ is zero) a)) false)))\n"
    );
    if queries == 2 {
        text.push_str(
            "(assert (forall ((a Nat) (b Nat)) \
               (=> (and (eqn a b) (not (= a b)) (le a zero) (le b zero)) false)))\n",
        );
    }
    text.push_str("(check-sat)\n");
    GeneratedBenchmark {
        name: format!("adt-nonlin/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::AdtNonlin,
        queries,
        oracle_eligible: false,
    }
}

fn lia_nonlin_arrays_nonrec_adt(rng: &mut TestRng, index: usize) -> GeneratedBenchmark {
    let k = rng.below(3);
    let text = format!(
        "(set-logic HORN)\n\
         (declare-datatypes ((Pair 0)) (((mk-pair (first Int) (second Int)))))\n\
         (declare-fun cell (Pair (Array Int Int)) Bool)\n\
         (declare-fun root (Pair) Bool)\n\
         (assert (forall ((p Pair)) (=> (and (= (first p) {k}) (= (second p) 0)) (root p))))\n\
         (assert (forall ((p Pair) (a (Array Int Int))) \
           (=> (and (root p) (= (select a (first p)) (second p))) (cell p a))))\n\
         (assert (forall ((p Pair) (q Pair) (a (Array Int Int))) \
           (=> (and (cell p a) (cell q a) (> (first p) (+ (first q) 5))) false)))\n\
         (check-sat)\n"
    );
    GeneratedBenchmark {
        name: format!("lia-nonlin-arrays-nonrecadt/gen-{:03}.smt2", index),
        text,
        expected_track: TrackId::LiaNonlinArraysNonrecAdt,
        queries: 1,
        oracle_eligible: false,
    }
}

/// Small multi-query scripts sized for the finite-model oracle, with
/// both satisfiable and unsatisfiable members over the 2-element
/// domains.
fn oracle_multi_query(index: usize, variant: u64) -> GeneratedBenchmark {
    // variant 0: queries never fire over {0,1}  -> finite-sat
    // variant 1: a query fires on the initial state -> finite-unsat
    // variant 2: two predicates, second query fires -> finite-unsat
    let text = match variant {
        0 => "(set-logic HORN)\n\
              (declare-fun inv (Int) Bool)\n\
              (assert (forall ((x Int)) (=> (= x 0) (inv x))))\n\
              (assert (forall ((x Int)) (=> (and (inv x) (> x 5)) false)))\n\
              (assert (forall ((x Int)) (=> (and (inv x) (< x (- 3))) false)))\n\
              (check-sat)\n"
            .to_string(),
        1 => "(set-logic HORN)\n\
              (declare-fun inv (Int) Bool)\n\
              (assert (forall ((x Int)) (=> (= x 0) (inv x))))\n\
              (assert (forall ((x Int)) (=> (and (inv x) (>= x 0)) false)))\n\
              (assert (forall ((x Int)) (=> (and (inv x) (> x 9)) false)))\n\
              (check-sat)\n"
            .to_string(),
        _ => "(set-logic HORN)\n\
              (declare-fun p (Int) Bool)\n\
              (declare-fun q (Bool) Bool)\n\
              (assert (forall ((x Int)) (=> (= x 1) (p x))))\n\
              (assert (forall ((b Bool)) (=> b (q b))))\n\
              (assert (forall ((x Int) (b Bool)) (=> (and (p x) (q b) (< x 0)) false)))\n\
              (assert (forall ((b Bool)) (=> (and (q b) b) false)))\n\
              (check-sat)\n"
            .to_string(),
    };
    GeneratedBenchmark {
        name: format!("oracle/multi-{:03}.smt2", index),
        text,
        expected_track: if variant == 2 {
            TrackId::LiaNonlin
        } else {
            TrackId::LiaLin
        },
        queries: 2,
        oracle_eligible: true,
    }
}

/// The generated corpus: at least fifty benchmarks across all eight
/// track shapes (the parallel track shares the LRA-TS shape), with a
/// multi-query subset sized for the oracle.
pub fn generate_corpus() -> Vec<GeneratedBenchmark> {
    let mut rng = TestRng::new(0x686f726e);
    let mut corpus = Vec::new();
    for i in 0..8 {
        corpus.push(lia_lin(&mut rng, i));
    }
    for i in 0..8 {
        corpus.push(lia_nonlin(&mut rng, i));
    }
    for i in 0..7 {
        corpus.push(lia_lin_arrays(&mut rng, i));
    }
    for i in 0..7 {
        corpus.push(lia_nonlin_arrays(&mut rng, i));
    }
    for i in 0..7 {
        corpus.push(lra_ts(&mut rng, i, false));
    }
    for i in 0..4 {
        corpus.push(lra_ts(&mut rng, i, true));
    }
    for i in 0..7 {
        corpus.push(adt_nonlin(&mut rng, i));
    }
    for i in 0..7 {
        corpus.push(lia_nonlin_arrays_nonrec_adt(&mut rng, i));
    }
    for i in 0..6 {
        corpus.push(oracle_multi_query(i, (i % 3) as u64));
    }
    corpus
}

/// Hand-labeled fixtures: at least two per producible track plus the
/// three canonical unclassifiable cases. LRA-TS-par shares the LRA-TS
/// benchmarks, so its fixtures are labeled LRA-TS.
pub fn classification_fixtures() -> Vec<(&'static str, &'static str, TrackId)> {
    vec![
        (
            "lia-lin-a",
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (=> (= x 0) (p x))))\
             (assert (forall ((x Int) (y Int)) (=> (and (p x) (= y (+ x 1))) (p y))))\
             (assert (forall ((x Int)) (=> (and (p x) (> x 10)) false)))(check-sat)",
            TrackId::LiaLin,
        ),
        (
            "lia-lin-b",
            "(set-logic HORN)(declare-fun a (Int Int) Bool)(declare-fun b (Int) Bool)\
             (assert (forall ((x Int) (y Int)) (=> (= (+ x y) 0) (a x y))))\
             (assert (forall ((x Int) (y Int)) (=> (a x y) (b x))))\
             (assert (forall ((x Int)) (=> (and (b x) (= (* 3 x) 9)) false)))(check-sat)",
            TrackId::LiaLin,
        ),
        (
            "lia-nonlin-a",
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (=> (= x 0) (p x))))\
             (assert (forall ((x Int) (y Int)) (=> (and (p x) (p y)) (p (+ x y)))))\
             (assert (forall ((x Int)) (=> (and (p x) (> x 4)) false)))(check-sat)",
            TrackId::LiaNonlin,
        ),
        (
            "lia-nonlin-b",
            "(set-logic HORN)(declare-fun p (Int) Bool)(declare-fun q (Int) Bool)\
             (assert (forall ((x Int)) (p x)))\
             (assert (forall ((x Int)) (=> (p x) (q x))))\
             (assert (not (exists ((x Int) (y Int)) (and (p x) (q y) (= x y)))))(check-sat)",
            TrackId::LiaNonlin,
        ),
        (
            "lia-lin-arrays-a",
            "(set-logic HORN)(declare-fun m ((Array Int Int)) Bool)\
             (assert (forall ((a (Array Int Int))) (=> (= (select a 0) 0) (m a))))\
             (assert (forall ((a (Array Int Int)) (b (Array Int Int))) \
               (=> (and (m a) (= b (store a 0 1))) (m b))))\
             (assert (forall ((a (Array Int Int))) (=> (and (m a) (> (select a 1) 5)) false)))\
             (check-sat)",
            TrackId::LiaLinArrays,
        ),
        (
            "lia-lin-arrays-b",
            "(set-logic HORN)(declare-fun inv (Int (Array Int Bool)) Bool)\
             (assert (forall ((i Int) (f (Array Int Bool))) \
               (=> (and (= i 0) (select f i)) (inv i f))))\
             (assert (forall ((i Int) (f (Array Int Bool))) (=> (inv i f) (inv (+ i 1) f))))\
             (assert (forall ((i Int) (f (Array Int Bool))) \
               (=> (and (inv i f) (> i 3)) false)))(check-sat)",
            TrackId::LiaLinArrays,
        ),
        (
            "lia-nonlin-arrays-a",
            "(set-logic HORN)(declare-fun r ((Array Int Int)) Bool)\
             (assert (forall ((a (Array Int Int))) (=> (= (select a 0) 1) (r a))))\
             (assert (forall ((a (Array Int Int)) (b (Array Int Int))) \
               (=> (and (r a) (r b) (= (select a 0) (select b 1))) (r (store a 1 2)))))\
             (assert (forall ((a (Array Int Int))) (=> (and (r a) (> (select a 2) 9)) false)))\
             (check-sat)",
            TrackId::LiaNonlinArrays,
        ),
        (
            "lia-nonlin-arrays-b",
            "(set-logic HORN)(declare-fun p ((Array Int Int) Int) Bool)\
             (assert (forall ((a (Array Int Int)) (i Int)) (=> (= i 0) (p a i))))\
             (assert (forall ((a (Array Int Int)) (i Int) (j Int)) \
               (=> (and (p a i) (p a j) (= (select a i) j)) (p a (+ i 1)))))\
             (assert (not (exists ((a (Array Int Int)) (i Int)) (and (p a i) (> i 7)))))\
             (check-sat)",
            TrackId::LiaNonlinArrays,
        ),
        (
            "lra-ts-a",
            "(set-logic HORN)(declare-fun st (Real) Bool)\
             (assert (forall ((x Real)) (=> (= x 0.0) (st x))))\
             (assert (forall ((x Real) (y Real)) (=> (and (st x) (= y (+ x 0.5))) (st y))))\
             (assert (forall ((x Real)) (=> (and (st x) (> x 3.5)) false)))(check-sat)",
            TrackId::LraTs,
        ),
        (
            "lra-ts-b",
            "(set-logic HORN)(declare-fun st (Real Real) Bool)\
             (assert (forall ((x Real) (y Real)) (=> (and (= x 1.0) (= y x)) (st x y))))\
             (assert (forall ((x Real) (y Real) (x2 Real) (y2 Real)) \
               (=> (and (st x y) (= x2 (/ x 2.0)) (= y2 (+ y 1.0))) (st x2 y2))))\
             (assert (forall ((x Real) (y Real)) (=> (and (st x y) (< x 0.01) (> y 100.0)) false)))\
             (check-sat)",
            TrackId::LraTs,
        ),
        // The parallel-track suite is the LRA-TS suite; classification
        // labels these LRA-TS and the runner picks the parallel mode.
        (
            "lra-ts-par-a",
            "(set-logic HORN)(declare-fun w (Real) Bool)\
             (assert (forall ((x Real)) (=> (= x 2.5) (w x))))\
             (assert (forall ((x Real) (y Real)) (=> (and (w x) (= y (- x 0.5))) (w y))))\
             (assert (forall ((x Real)) (=> (and (w x) (< x (- 10.0))) false)))(check-sat)",
            TrackId::LraTs,
        ),
        (
            "lra-ts-par-b",
            "(set-logic HORN)(declare-fun w (Real Real) Bool)\
             (assert (forall ((x Real) (y Real)) (=> (and (= x 0.0) (= y 0.25)) (w x y))))\
             (assert (forall ((x Real) (y Real) (z Real)) \
               (=> (and (w x y) (= z (+ x y))) (w z y))))\
             (assert (forall ((x Real) (y Real)) (=> (and (w x y) (>= x 17.75)) false)))\
             (check-sat)",
            TrackId::LraTs,
        ),
        (
            "adt-nonlin-a",
            "(set-logic HORN)\
             (declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))\
             (declare-fun add (Nat Nat Nat) Bool)\
             (assert (forall ((n Nat)) (add zero n n)))\
             (assert (forall ((a Nat) (b Nat) (c Nat)) (=> (add a b c) (add (succ a) b (succ c)))))\
             (assert (forall ((a Nat) (b Nat) (c Nat) (d Nat)) \
               (=> (and (add a b c) (add a b d) (not (= c d))) false)))(check-sat)",
            TrackId::AdtNonlin,
        ),
        (
            "adt-nonlin-b",
            "(set-logic HORN)\
             (declare-datatypes ((Lst 0) (Elt 0)) \
               (((nil) (cons (head Elt) (tail Lst))) ((red) (black))))\
             (declare-fun mem (Elt Lst) Bool)\
             (assert (forall ((e Elt) (l Lst)) (mem e (cons e l))))\
             (assert (forall ((e Elt) (f Elt) (l Lst)) (=> (mem e l) (mem e (cons f l)))))\
             (assert (forall ((e Elt) (l Lst) (m Lst)) \
               (=> (and (mem e l) (mem e m) ((_ is nil) l)) false)))(check-sat)",
            TrackId::AdtNonlin,
        ),
        (
            "nonrec-adt-a",
            "(set-logic HORN)\
             (declare-datatypes ((Pair 0)) (((mk-pair (first Int) (second Int)))))\
             (declare-fun p (Pair (Array Int Int)) Bool)\
             (assert (forall ((q Pair) (a (Array Int Int))) \
               (=> (= (first q) (select a 0)) (p q a))))\
             (assert (forall ((q Pair) (r Pair) (a (Array Int Int))) \
               (=> (and (p q a) (p r a) (= (second q) (second r))) false)))(check-sat)",
            TrackId::LiaNonlinArraysNonrecAdt,
        ),
        (
            "nonrec-adt-b",
            "(set-logic HORN)\
             (declare-datatype Wrap ((wrap (unwrap Int))))\
             (declare-fun st (Wrap (Array Int Int) Int) Bool)\
             (assert (forall ((w Wrap) (a (Array Int Int))) \
               (=> (= (unwrap w) 0) (st w a 0))))\
             (assert (forall ((w Wrap) (v Wrap) (a (Array Int Int)) (i Int)) \
               (=> (and (st w a i) (st v a i) (= (select a i) i)) (st w a (+ i 1)))))\
             (assert (not (exists ((w Wrap) (a (Array Int Int)) (i Int)) \
               (and (st w a i) (> i 3)))))(check-sat)",
            TrackId::LiaNonlinArraysNonrecAdt,
        ),
        (
            "unclassified-nonlinear-arith",
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int) (y Int)) (=> (= x (* x y)) (p x))))\
             (assert (forall ((x Int)) (=> (p x) false)))(check-sat)",
            TrackId::Unclassified,
        ),
        (
            "unclassified-mixed-real-int",
            "(set-logic HORN)(declare-fun p (Int Real) Bool)\
             (assert (forall ((x Int) (r Real)) (=> (and (= x 0) (> r 0.5)) (p x r))))\
             (assert (forall ((x Int) (r Real)) (=> (p x r) false)))(check-sat)",
            TrackId::Unclassified,
        ),
        (
            "unclassified-recursive-adt-with-int",
            "(set-logic HORN)\
             (declare-datatypes ((Lst 0)) (((nil) (cons (head Int) (tail Lst)))))\
             (declare-fun len (Lst Int) Bool)\
             (assert (len nil 0))\
             (assert (forall ((l Lst) (n Int) (e Int)) \
               (=> (len l n) (len (cons e l) (+ n 1)))))\
             (assert (forall ((l Lst) (n Int)) (=> (and (len l n) (< n 0)) false)))(check-sat)",
            TrackId::Unclassified,
        ),
    ]
}
