//! Small reference nets used throughout the tests and the README.

/// A cycle `t t'` over `s1`/`s2` that can only run after borrowing a token
/// from the side cycle `u u'` through `s3`.
pub const NET_A: &str = "\
{ borrowing a token from a side cycle }
PLACE s1, s2, s3;
MARKING s3: 1;
TRANSITION t
  CONSUME s2;
  PRODUCE s1;
TRANSITION t'
  CONSUME s1;
  PRODUCE s2;
TRANSITION u
  CONSUME s3;
  PRODUCE s2;
TRANSITION u'
  CONSUME s2;
  PRODUCE s3;
";

/// Two cycles `t t'` and `u u'` that each need a token from the other one
/// (through side loops on `s2` and `s3`), so only an interleaving fires.
pub const NET_B: &str = "\
{ two mutually dependent cycles }
PLACE s1, s2, s3, s4;
MARKING s1: 1, s4: 1;
TRANSITION t
  CONSUME s1;
  PRODUCE s2;
TRANSITION t'
  CONSUME s2, s3;
  PRODUCE s1, s3;
TRANSITION u
  CONSUME s4, s2;
  PRODUCE s3, s2;
TRANSITION u'
  CONSUME s3;
  PRODUCE s4;
";

/// A condensed process with one token flowing from `i` to `o`. The cycle
/// `c1 k1 c2 k2` leaves a token on `a2` that can never be removed, so `x2`
/// can never fire on the way to `{o:1}`.
pub const NET_C: &str = "\
{ flawed process: one token from i to o }
PLACE i, c1, c2, a1, a2, o;
MARKING i: 1;
TRANSITION u
  CONSUME i;
  PRODUCE c1, a1;
TRANSITION d
  CONSUME i;
  PRODUCE a1;
TRANSITION k1
  CONSUME c1;
  PRODUCE c2, a2;
TRANSITION k2
  CONSUME c2;
  PRODUCE c1;
TRANSITION l
  CONSUME c2;
  PRODUCE a2;
TRANSITION x1
  CONSUME a1;
  PRODUCE o;
TRANSITION x2
  CONSUME a1, a2;
  PRODUCE o;
";
