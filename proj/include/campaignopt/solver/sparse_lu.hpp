#pragma once

// Sparse LU factorization of a basis matrix with partial pivoting, built
// column by column (left-looking, with depth-first symbolic reachability so
// each triangular solve touches only the nonzero pattern). Basis changes
// between refactorizations are absorbed as product-form eta columns.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace campaignopt::solver {

struct SparseVec {
    std::vector<int> idx;
    std::vector<double> val;
    void clear() {
        idx.clear();
        val.clear();
    }
    void push(int i, double v) {
        idx.push_back(i);
        val.push_back(v);
    }
    size_t size() const { return idx.size(); }
};

class SparseLU {
  public:
    // columns[k] is the k-th basis column as (row, value) pairs over an m-row
    // space. Throws on structural or numerical singularity.
    void factorize(const std::vector<const SparseVec*>& columns, int m) {
        m_ = m;
        const int n = static_cast<int>(columns.size());
        if (n != m) throw std::runtime_error("SparseLU: basis must be square");
        lcol_.assign(m, {});
        ucol_.assign(m, {});
        udiag_.assign(m, 0.0);
        rowperm_.assign(m, -1);   // matrix row -> pivot position
        rowperm_inv_.assign(m, -1);
        etas_.clear();
        work_.assign(m, 0.0);
        mark_.assign(m, 0);
        stamp_ = 0;

        std::vector<int> stack, pattern;
        for (int k = 0; k < m; ++k) {
            // Sparse solve L y = a_k where L is built from prior columns.
            ++stamp_;
            pattern.clear();
            const SparseVec& a = *columns[k];
            for (size_t s = 0; s < a.size(); ++s)
                dfs_reach(a.idx[s], stack, pattern);
            for (size_t s = 0; s < a.size(); ++s) work_[a.idx[s]] += a.val[s];
            // pattern is in topological order (reverse DFS postorder stored
            // reversed below); process pivotal rows in pivot order.
            for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
                int r = *it;
                int piv = rowperm_[r];
                if (piv < 0) continue;
                double yr = work_[r];
                if (yr == 0.0) continue;
                const SparseVec& lc = lcol_[piv];
                for (size_t s = 0; s < lc.size(); ++s)
                    work_[lc.idx[s]] -= lc.val[s] * yr;
            }
            // Partial pivot among non-pivotal rows.
            int best = -1;
            double bestval = 0.0;
            for (int r : pattern) {
                if (rowperm_[r] >= 0) continue;
                double av = std::fabs(work_[r]);
                if (av > bestval) {
                    bestval = av;
                    best = r;
                }
            }
            if (best < 0 || bestval < 1e-11)
                throw std::runtime_error("SparseLU: singular basis");
            double piv = work_[best];
            rowperm_[best] = k;
            rowperm_inv_[k] = best;
            udiag_[k] = piv;
            for (int r : pattern) {
                double v = work_[r];
                work_[r] = 0.0;
                if (v == 0.0 || r == best) continue;
                int pp = rowperm_[r];
                if (pp >= 0 && pp < k)
                    ucol_[k].push(pp, v);
                else if (pp < 0)
                    lcol_[k].push(r, v / piv);
            }
            work_[best] = 0.0;
        }
    }

    // Record replacement of basis position r by a column whose FTRAN image is
    // w (i.e. w = B^{-1} a). Returns false when the pivot element is too small
    // to be trusted; the caller should refactorize instead.
    bool add_eta(int r, const SparseVec& w) {
        double wr = 0.0;
        for (size_t s = 0; s < w.size(); ++s)
            if (w.idx[s] == r) wr = w.val[s];
        double wmax = 0.0;
        for (size_t s = 0; s < w.size(); ++s)
            wmax = std::max(wmax, std::fabs(w.val[s]));
        if (std::fabs(wr) < 1e-9 || std::fabs(wr) < 1e-9 * wmax) return false;
        etas_.push_back({r, wr, w});
        return true;
    }

    int eta_count() const { return static_cast<int>(etas_.size()); }

    // x := B^{-1} x (dense in/out).
    void ftran(std::vector<double>& x) const {
        lsolve(x);
        usolve(x);
        for (const Eta& e : etas_) {
            double xr = x[e.r] / e.wr;
            if (xr != 0.0) {
                for (size_t s = 0; s < e.w.size(); ++s)
                    x[e.w.idx[s]] -= e.w.val[s] * xr;
                x[e.r] = xr;
            } else {
                x[e.r] = 0.0;
            }
        }
    }

    // x := B^{-T} x (dense in/out).
    void btran(std::vector<double>& x) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const Eta& e = *it;
            double dot = 0.0;
            for (size_t s = 0; s < e.w.size(); ++s)
                if (e.w.idx[s] != e.r) dot += e.w.val[s] * x[e.w.idx[s]];
            x[e.r] = (x[e.r] - dot) / e.wr;
        }
        utsolve(x);
        ltsolve(x);
    }

  private:
    struct Eta {
        int r;
        double wr;
        SparseVec w;
    };

    void dfs_reach(int root, std::vector<int>& stack, std::vector<int>& pattern) {
        if (mark_[root] == stamp_) return;
        stack.clear();
        stack.push_back(root);
        std::vector<int> pos{0};
        while (!stack.empty()) {
            int r = stack.back();
            if (mark_[r] != stamp_) mark_[r] = stamp_;
            int piv = rowperm_[r];
            bool descended = false;
            if (piv >= 0) {
                const SparseVec& lc = lcol_[piv];
                int& p = pos.back();
                while (p < static_cast<int>(lc.size())) {
                    int child = lc.idx[p++];
                    if (mark_[child] != stamp_) {
                        stack.push_back(child);
                        pos.push_back(0);
                        descended = true;
                        break;
                    }
                }
            }
            if (!descended) {
                pattern.push_back(r);
                stack.pop_back();
                pos.pop_back();
            }
        }
    }

    // Solve L y = x in place. L has unit diagonal at pivot rows; entries of
    // lcol_[k] are below-pivot rows of column k.
    void lsolve(std::vector<double>& x) const {
        for (int k = 0; k < m_; ++k) {
            double xr = x[rowperm_inv_[k]];
            if (xr == 0.0) continue;
            const SparseVec& lc = lcol_[k];
            for (size_t s = 0; s < lc.size(); ++s) x[lc.idx[s]] -= lc.val[s] * xr;
        }
    }
    // Solve U z = y; U is stored by columns at pivot positions. Result placed
    // in pivot-position order.
    void usolve(std::vector<double>& x) const {
        std::vector<double> z(m_);
        for (int k = m_ - 1; k >= 0; --k) {
            double v = x[rowperm_inv_[k]] / udiag_[k];
            z[k] = v;
            if (v == 0.0) continue;
            const SparseVec& uc = ucol_[k];
            for (size_t s = 0; s < uc.size(); ++s)
                x[rowperm_inv_[uc.idx[s]]] -= uc.val[s] * v;
        }
        x.swap(z);
    }
    // Solve U^T y = x (x indexed by pivot position), result scattered back to
    // matrix-row indexing for the subsequent L^T solve.
    void utsolve(std::vector<double>& x) const {
        std::vector<double> y(m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            double v = x[k];
            const SparseVec& uc = ucol_[k];
            for (size_t s = 0; s < uc.size(); ++s) v -= uc.val[s] * y[uc.idx[s]];
            y[k] = v / udiag_[k];
        }
        for (int k = 0; k < m_; ++k) x[rowperm_inv_[k]] = 0.0;
        std::vector<double> out(m_, 0.0);
        for (int k = 0; k < m_; ++k) out[rowperm_inv_[k]] = y[k];
        x.swap(out);
    }
    // Solve L^T y = x in place (matrix-row indexing).
    void ltsolve(std::vector<double>& x) const {
        for (int k = m_ - 1; k >= 0; --k) {
            const SparseVec& lc = lcol_[k];
            double acc = x[rowperm_inv_[k]];
            for (size_t s = 0; s < lc.size(); ++s) acc -= lc.val[s] * x[lc.idx[s]];
            x[rowperm_inv_[k]] = acc;
        }
    }

    int m_ = 0;
    std::vector<SparseVec> lcol_, ucol_;
    std::vector<double> udiag_;
    std::vector<int> rowperm_, rowperm_inv_;
    std::vector<Eta> etas_;
    std::vector<double> work_;
    std::vector<int> mark_;
    int stamp_ = 0;
};

}  // namespace campaignopt::solver
