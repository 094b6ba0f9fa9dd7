//! Closed-loop simulator (under construction).
