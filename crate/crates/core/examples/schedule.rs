//! Multi-scale schedule in log domain, with certified distances where positive.

use widthlab::separation::{build_schedule, tail_sum_bound, SeparationParams};

pub fn main() {
    let params = SeparationParams::new(0.5, 0.125, 1.0, 1.0, 1.0).expect("valid rates");
    let schedule = build_schedule(&params, 5).expect("beta < alpha / 2");
    println!("{:>2} {:>8} {:>14} {:>14} {:>10}", "k", "log2 n_k", "ln m_k", "ln t_k", "exponent");
    for e in &schedule.entries {
        let eff = e.effective_exponent.map_or("-".to_string(), |x| format!("{x:.5}"));
        println!("{:>2} {:>8} {:>14.4} {:>14.4} {:>10}", e.k, e.log2_n_k, e.log_m_k, e.log_t_k, eff);
    }
    for k in 1..=3 {
        let tail = tail_sum_bound(k).expect("k in range");
        println!("tail bound k = {k}: log2 = {:.4}, dominated = {}", tail.log2_value, tail.dominated());
    }
}
