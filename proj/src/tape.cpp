// SPDX-License-Identifier: Apache-2.0
#include "tape.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

Tape::Var Tape::make_leaf(Tensor value, bool needs_grad) {
    Var v{int32_t(nodes_.size()), value.rows, value.cols};
    nodes_.push_back(Node{std::move(value), {}, needs_grad, false, nullptr});
    return v;
}

Tape::Var Tape::make_node(Tensor value, bool needs_grad, BackFn back) {
    Var v{int32_t(nodes_.size()), value.rows, value.cols};
    nodes_.push_back(Node{std::move(value), {}, needs_grad, false, std::move(back)});
    return v;
}

Tape::Node& Tape::node(Var v) {
    if (!v.valid() || size_t(v.id) >= nodes_.size()) throw UsageError("tape: invalid var");
    return nodes_[size_t(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
    if (!v.valid() || size_t(v.id) >= nodes_.size()) throw UsageError("tape: invalid var");
    return nodes_[size_t(v.id)];
}

Tensor& Tape::grad_buf(int32_t id) {
    Node& n = nodes_[size_t(id)];
    if (!n.grad_ready) {
        n.grad = Tensor::zeros(n.val.rows, n.val.cols);
        n.grad_ready = true;
    }
    return n.grad;
}

const Tensor& Tape::value(Var v) const { return node(v).val; }

bool Tape::has_grad(Var v) const { return node(v).grad_ready; }

const Tensor& Tape::grad(Var v) const {
    if (!backward_done_) throw UsageError("tape: grad() before backward()");
    const Node& n = node(v);
    if (!n.grad_ready) throw UsageError("tape: no gradient recorded for var");
    return n.grad;
}

Tape::Var Tape::matmul(Var a, Var b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.val.cols != nb.val.rows) throw ShapeError("tape.matmul: inner dims disagree");
    Tensor out(na.val.rows, nb.val.cols);
    kernels::matmul(na.val.data(), nb.val.data(), out.data(), na.val.rows, na.val.cols,
                    nb.val.cols);
    const bool ng = na.needs_grad || nb.needs_grad;
    BackFn back = [a, b](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        const Tensor& av = t.node(a).val;
        const Tensor& bv = t.node(b).val;
        if (t.node(a).needs_grad) {
            Tensor da(av.rows, av.cols);
            kernels::matmul_a_bt(dout.data(), bv.data(), da.data(), dout.rows, dout.cols, av.cols);
            kernels::add_inplace(t.grad_buf(a.id).data(), da.data(), da.size());
        }
        if (t.node(b).needs_grad) {
            Tensor db(bv.rows, bv.cols);
            kernels::matmul_at_b(av.data(), dout.data(), db.data(), av.rows, av.cols, dout.cols);
            kernels::add_inplace(t.grad_buf(b.id).data(), db.data(), db.size());
        }
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::add(Var a, Var b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (!na.val.same_shape(nb.val)) throw ShapeError("tape.add: shape mismatch");
    Tensor out = na.val;
    kernels::add_inplace(out.data(), nb.val.data(), out.size());
    const bool ng = na.needs_grad || nb.needs_grad;
    BackFn back = [a, b](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        if (t.node(a).needs_grad)
            kernels::add_inplace(t.grad_buf(a.id).data(), dout.data(), dout.size());
        if (t.node(b).needs_grad)
            kernels::add_inplace(t.grad_buf(b.id).data(), dout.data(), dout.size());
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::add_bias(Var x, Var bias) {
    const Node& nx = node(x);
    const Node& nb = node(bias);
    if (nb.val.rows != 1 || nb.val.cols != nx.val.cols)
        throw ShapeError("tape.add_bias: bias must be 1 x cols");
    Tensor out = nx.val;
    kernels::add_bias_rows(out.data(), nb.val.data(), out.rows, out.cols);
    const bool ng = nx.needs_grad || nb.needs_grad;
    BackFn back = [x, bias](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        if (t.node(x).needs_grad)
            kernels::add_inplace(t.grad_buf(x.id).data(), dout.data(), dout.size());
        if (t.node(bias).needs_grad)
            kernels::col_sum(dout.data(), dout.rows, dout.cols, t.grad_buf(bias.id).data());
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::relu(Var x) {
    const Node& nx = node(x);
    Tensor out(nx.val.rows, nx.val.cols);
    kernels::relu(nx.val.data(), out.data(), out.size());
    const bool ng = nx.needs_grad;
    BackFn back = [x](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        kernels::relu_backward(t.node(x).val.data(), dout.data(), t.grad_buf(x.id).data(),
                               dout.size());
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::concat_cols(const std::vector<Var>& xs) {
    if (xs.empty()) throw ShapeError("tape.concat_cols: empty input");
    const int64_t rows = node(xs[0]).val.rows;
    int64_t cols = 0;
    bool ng = false;
    for (Var v : xs) {
        if (node(v).val.rows != rows) throw ShapeError("tape.concat_cols: row mismatch");
        cols += node(v).val.cols;
        ng = ng || node(v).needs_grad;
    }
    Tensor out(rows, cols);
    int64_t off = 0;
    for (Var v : xs) {
        const Tensor& t = node(v).val;
        for (int64_t r = 0; r < rows; ++r)
            std::copy(t.row(r), t.row(r) + t.cols, out.row(r) + off);
        off += t.cols;
    }
    auto parts = xs;
    BackFn back = [parts](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        int64_t off2 = 0;
        for (Var v : parts) {
            const Tensor& val = t.node(v).val;
            if (t.node(v).needs_grad) {
                Tensor& g = t.grad_buf(v.id);
                for (int64_t r = 0; r < dout.rows; ++r) {
                    const double* src = dout.row(r) + off2;
                    double* dst = g.row(r);
                    for (int64_t c = 0; c < val.cols; ++c) dst[c] += src[c];
                }
            }
            off2 += val.cols;
        }
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::gather_rows(Var x, const IndexGroups& g) {
    const Node& nx = node(x);
    if (g.domain != uint32_t(nx.val.rows)) throw ShapeError("tape.gather_rows: domain mismatch");
    Tensor out(int64_t(g.positions()), nx.val.cols);
    kernels::gather_rows(nx.val.data(), g.idx.data(), out.data(), out.rows, out.cols);
    const bool ng = nx.needs_grad;
    const IndexGroups* gp = &g;  // groups outlive the tape (owned by the graph)
    BackFn back = [x, gp](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        kernels::segment_sum_rows(dout.data(), dout.cols, *gp, t.grad_buf(x.id).data());
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::segment_sum(Var msgs, const IndexGroups& g) {
    const Node& nm = node(msgs);
    if (g.positions() != size_t(nm.val.rows)) throw ShapeError("tape.segment_sum: rows mismatch");
    Tensor out(int64_t(g.domain), nm.val.cols);
    kernels::segment_sum_rows(nm.val.data(), nm.val.cols, g, out.data());
    const bool ng = nm.needs_grad;
    const IndexGroups* gp = &g;
    BackFn back = [msgs, gp](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        Tensor dm(int64_t(gp->positions()), dout.cols);
        kernels::gather_rows(dout.data(), gp->idx.data(), dm.data(), dm.rows, dm.cols);
        kernels::add_inplace(t.grad_buf(msgs.id).data(), dm.data(), dm.size());
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::segment_mean(Var msgs, const IndexGroups& g) {
    const Node& nm = node(msgs);
    if (g.positions() != size_t(nm.val.rows)) throw ShapeError("tape.segment_mean: rows mismatch");
    Tensor out(int64_t(g.domain), nm.val.cols);
    kernels::segment_sum_rows(nm.val.data(), nm.val.cols, g, out.data());
    for (uint32_t s = 0; s < g.domain; ++s) {
        const uint32_t cnt = g.offsets[s + 1] - g.offsets[s];
        if (cnt > 1) {
            const double inv = 1.0 / double(cnt);
            double* r = out.row(s);
            for (int64_t c = 0; c < out.cols; ++c) r[c] *= inv;
        }
    }
    const bool ng = nm.needs_grad;
    const IndexGroups* gp = &g;
    BackFn back = [msgs, gp](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        Tensor& gm = t.grad_buf(msgs.id);
        for (size_t p = 0; p < gp->positions(); ++p) {
            const uint32_t s = gp->idx[p];
            const uint32_t cnt = gp->offsets[s + 1] - gp->offsets[s];
            const double inv = 1.0 / double(cnt);
            const double* src = dout.row(s);
            double* dst = gm.row(int64_t(p));
            for (int64_t c = 0; c < dout.cols; ++c) dst[c] += inv * src[c];
        }
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::scale(Var x, double s) {
    const Node& nx = node(x);
    Tensor out = nx.val;
    for (auto& v : out.v) v *= s;
    const bool ng = nx.needs_grad;
    BackFn back = [x, s](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        Tensor& g = t.grad_buf(x.id);
        for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += s * dout.v[i];
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::weighted_rows_sum(Var weights, const Tensor& dirs, const IndexGroups& g) {
    const Node& nw = node(weights);
    if (nw.val.cols != 1 || size_t(nw.val.rows) != g.positions() || dirs.rows != nw.val.rows)
        throw ShapeError("tape.weighted_rows_sum: shape mismatch");
    Tensor out(int64_t(g.domain), dirs.cols);
    for (uint32_t s = 0; s < g.domain; ++s) {
        double* dst = out.row(s);
        for (uint32_t q = g.offsets[s]; q < g.offsets[s + 1]; ++q) {
            const uint32_t p = g.order[q];
            const double w = nw.val.v[p];
            const double* d = dirs.row(p);
            for (int64_t c = 0; c < dirs.cols; ++c) dst[c] += w * d[c];
        }
    }
    const bool ng = nw.needs_grad;
    const IndexGroups* gp = &g;
    const Tensor* dp = &dirs;  // caller keeps dirs alive (owned by the graph/loss state)
    BackFn back = [weights, gp, dp](Tape& t, int32_t out) {
        const Tensor& dout = t.nodes_[size_t(out)].grad;
        Tensor& gw = t.grad_buf(weights.id);
        for (size_t p = 0; p < gp->positions(); ++p) {
            const double* drow = dout.row(gp->idx[p]);
            const double* dir = dp->row(int64_t(p));
            double acc = 0;
            for (int64_t c = 0; c < dp->cols; ++c) acc += drow[c] * dir[c];
            gw.v[p] += acc;
        }
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::sse(Var x, const Tensor& target, double inv_denom) {
    const Node& nx = node(x);
    if (!nx.val.same_shape(target)) throw ShapeError("tape.sse: target shape mismatch");
    double acc = 0;
    for (size_t i = 0; i < nx.val.v.size(); ++i) {
        const double d = nx.val.v[i] - target.v[i];
        acc += d * d;
    }
    Tensor out(1, 1);
    out.v[0] = acc * inv_denom;
    const bool ng = nx.needs_grad;
    Tensor tgt = target;  // copy; loss targets are small
    BackFn back = [x, tgt = std::move(tgt), inv_denom](Tape& t, int32_t out) {
        const double dscalar = t.nodes_[size_t(out)].grad.v[0];
        const Tensor& xv = t.node(x).val;
        Tensor& g = t.grad_buf(x.id);
        const double k = 2.0 * inv_denom * dscalar;
        for (size_t i = 0; i < xv.v.size(); ++i) g.v[i] += k * (xv.v[i] - tgt.v[i]);
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::softmax_xent(Var logits, const std::vector<int>& labels, double inv_denom) {
    const Node& nl = node(logits);
    if (size_t(nl.val.rows) != labels.size()) throw ShapeError("tape.softmax_xent: label count");
    double acc = 0;
    for (int64_t r = 0; r < nl.val.rows; ++r) {
        const double* row = nl.val.row(r);
        double mx = row[0];
        for (int64_t c = 1; c < nl.val.cols; ++c) mx = std::max(mx, row[c]);
        double z = 0;
        for (int64_t c = 0; c < nl.val.cols; ++c) z += std::exp(row[c] - mx);
        const int lab = labels[size_t(r)];
        if (lab < 0 || lab >= nl.val.cols) throw ShapeError("tape.softmax_xent: label out of range");
        acc += std::log(z) + mx - row[lab];
    }
    Tensor out(1, 1);
    out.v[0] = acc * inv_denom;
    const bool ng = nl.needs_grad;
    auto labs = labels;
    BackFn back = [logits, labs = std::move(labs), inv_denom](Tape& t, int32_t out) {
        const double dscalar = t.nodes_[size_t(out)].grad.v[0];
        const Tensor& lv = t.node(logits).val;
        Tensor& g = t.grad_buf(logits.id);
        const double k = inv_denom * dscalar;
        for (int64_t r = 0; r < lv.rows; ++r) {
            const double* row = lv.row(r);
            double mx = row[0];
            for (int64_t c = 1; c < lv.cols; ++c) mx = std::max(mx, row[c]);
            double z = 0;
            for (int64_t c = 0; c < lv.cols; ++c) z += std::exp(row[c] - mx);
            double* gr = g.row(r);
            for (int64_t c = 0; c < lv.cols; ++c) {
                const double p = std::exp(row[c] - mx) / z;
                gr[c] += k * (p - (c == labs[size_t(r)] ? 1.0 : 0.0));
            }
        }
    };
    return make_node(std::move(out), ng, ng ? back : BackFn{});
}

Tape::Var Tape::add_scalars(Var a, Var b) { return add(a, b); }

void Tape::backward(Var scalar) {
    Node& n = node(scalar);
    if (n.val.rows != 1 || n.val.cols != 1) throw UsageError("tape.backward: not a scalar");
    if (!n.needs_grad) throw UsageError("tape.backward: no recorded computation requires grad");
    grad_buf(scalar.id).v[0] = 1.0;
    for (int32_t id = scalar.id; id >= 0; --id) {
        Node& cur = nodes_[size_t(id)];
        if (!cur.back || !cur.grad_ready) continue;
        cur.back(*this, id);
    }
    backward_done_ = true;
}

}  // namespace siamdiff
