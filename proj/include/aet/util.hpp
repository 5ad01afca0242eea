#ifndef AET_UTIL_HPP
#define AET_UTIL_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

namespace aet {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes (parse=2, budget=3, invariant=4).
// ---------------------------------------------------------------------------

struct parse_error : std::runtime_error {
    std::size_t offset;
    parse_error(std::size_t off, const std::string& what)
        : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"),
          offset(off) {}
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hard limits for the enumerative counters. Exceeding one raises budget_error;
// counts are never silently truncated.
struct Budget {
    u64 max_items = 400'000'000;   // loop iterations / table entries
    u64 max_bytes = 2ull << 30;    // working-set estimate
    double max_seconds = 600.0;

    void check_items(u64 n, const char* what) const {
        if (n > max_items)
            throw budget_error(std::string(what) + ": " + std::to_string(n) +
                               " items exceed budget " + std::to_string(max_items));
    }
    void check_bytes(u64 n, const char* what) const {
        if (n > max_bytes)
            throw budget_error(std::string(what) + ": " + std::to_string(n) +
                               " bytes exceed budget " + std::to_string(max_bytes));
    }
};

class StopWatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0).count();
    }
};

// ---------------------------------------------------------------------------
// Machine-word modular arithmetic (moduli < 2^62).
// ---------------------------------------------------------------------------

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

inline u64 powmod_u64(u64 base, u64 e, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        e >>= 1;
    }
    return r;
}

inline i64 mod_reduce(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// value of an mpz reduced into [0, m)
inline i64 mod_reduce(const mpz_class& a, i64 m) {
    mpz_class r = a % m;
    i64 v = r.get_si();
    return v < 0 ? v + m : v;
}

inline i64 egcd_i64(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = (a >= 0 ? 1 : -1); y = 0; return a >= 0 ? a : -a; }
    i64 x1, y1;
    i64 g = egcd_i64(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline i64 invmod_i64(i64 a, i64 m) {
    i64 x, y;
    i64 g = egcd_i64(mod_reduce(a, m), m, x, y);
    if (g != 1) throw invariant_error("invmod: arguments not coprime");
    return mod_reduce(x, m);
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Compensated (Kahan) accumulation for the exponential sums.
// ---------------------------------------------------------------------------

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// ---------------------------------------------------------------------------
// Deterministic chunked parallelism: work is split into fixed-size chunks,
// per-chunk partials are combined in chunk order, so results are identical
// for any worker count.
// ---------------------------------------------------------------------------

template <typename Partial, typename ChunkFn, typename CombineFn>
void parallel_chunks(u64 n_items, u64 chunk_size, unsigned threads,
                     ChunkFn&& per_chunk, CombineFn&& combine) {
    if (n_items == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    u64 n_chunks = (n_items + chunk_size - 1) / chunk_size;
    std::vector<Partial> partials(n_chunks);
    if (threads <= 1 || n_chunks == 1) {
        for (u64 ci = 0; ci < n_chunks; ++ci) {
            u64 lo = ci * chunk_size;
            u64 hi = std::min(n_items, lo + chunk_size);
            per_chunk(ci, lo, hi, partials[ci]);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<u64> next{0};
        unsigned nt = std::min<u64>(threads, n_chunks);
        for (unsigned t = 0; t < nt; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    u64 ci = next.fetch_add(1);
                    if (ci >= n_chunks) break;
                    u64 lo = ci * chunk_size;
                    u64 hi = std::min(n_items, lo + chunk_size);
                    per_chunk(ci, lo, hi, partials[ci]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (u64 ci = 0; ci < n_chunks; ++ci) combine(ci, partials[ci]);
}

// FNV-1a, used for stable config digests.
inline u64 fnv1a64(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string to_hex(u64 v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) { s[i] = digits[v & 0xf]; v >>= 4; }
    return s;
}

} // namespace aet

#endif
