#include "evopatch/nn/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace evopatch::nn::kernels {

template <typename T>
void conv2d_forward(const T* x, int B, int H, int W, int C, const T* w, const T* bias, int KH,
                    int KW, int OC, T* y) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
#pragma omp parallel for collapse(2) schedule(static) if (static_cast<long>(B) * OH > 1)
    for (int b = 0; b < B; ++b) {
        for (int oh = 0; oh < OH; ++oh) {
            std::vector<T> acc(OC);
            for (int ow = 0; ow < OW; ++ow) {
                std::copy(bias, bias + OC, acc.begin());
                for (int kh = 0; kh < KH; ++kh) {
                    const T* xrow = x + ((static_cast<size_t>(b) * H + oh + kh) * W + ow) * C;
                    const T* wrow = w + static_cast<size_t>(kh) * KW * C * OC;
                    for (int kw = 0; kw < KW; ++kw) {
                        for (int ic = 0; ic < C; ++ic) {
                            const T xv = xrow[kw * C + ic];
                            const T* wv = wrow + (static_cast<size_t>(kw) * C + ic) * OC;
                            for (int oc = 0; oc < OC; ++oc) {
                                acc[oc] += xv * wv[oc];
                            }
                        }
                    }
                }
                T* out = y + ((static_cast<size_t>(b) * OH + oh) * OW + ow) * OC;
                std::copy(acc.begin(), acc.end(), out);
            }
        }
    }
}

template <typename T>
void conv2d_backward_input(const T* dy, int B, int H, int W, int C, const T* w, int KH, int KW,
                           int OC, T* dx) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    // Gather form: each input slot sums the output positions its value fed.
#pragma omp parallel for collapse(2) schedule(static) if (static_cast<long>(B) * H > 1)
    for (int b = 0; b < B; ++b) {
        for (int ih = 0; ih < H; ++ih) {
            for (int iw = 0; iw < W; ++iw) {
                const int kh_lo = std::max(0, ih - (OH - 1));
                const int kh_hi = std::min(KH - 1, ih);
                const int kw_lo = std::max(0, iw - (OW - 1));
                const int kw_hi = std::min(KW - 1, iw);
                T* out = dx + ((static_cast<size_t>(b) * H + ih) * W + iw) * C;
                std::fill(out, out + C, T{});
                for (int kh = kh_lo; kh <= kh_hi; ++kh) {
                    for (int kw = kw_lo; kw <= kw_hi; ++kw) {
                        const T* dyv =
                            dy + ((static_cast<size_t>(b) * OH + (ih - kh)) * OW + (iw - kw)) * OC;
                        const T* wbase = w + (static_cast<size_t>(kh) * KW + kw) * C * OC;
                        for (int ic = 0; ic < C; ++ic) {
                            T acc{};
                            const T* wv = wbase + static_cast<size_t>(ic) * OC;
                            for (int oc = 0; oc < OC; ++oc) {
                                acc += dyv[oc] * wv[oc];
                            }
                            out[ic] += acc;
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
void conv2d_backward_params(const T* x, const T* dy, int B, int H, int W, int C, int KH, int KW,
                            int OC, T* dw, T* db) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    const int rows = KH * KW * C;
    // Each (kh, kw, ic) row of dw is owned by one iteration.
#pragma omp parallel for schedule(static) if (rows > 1)
    for (int r = 0; r < rows; ++r) {
        const int kh = r / (KW * C);
        const int kw = (r / C) % KW;
        const int ic = r % C;
        T* out = dw + static_cast<size_t>(r) * OC;
        for (int b = 0; b < B; ++b) {
            for (int oh = 0; oh < OH; ++oh) {
                const T* xrow = x + ((static_cast<size_t>(b) * H + oh + kh) * W + kw) * C + ic;
                const T* dyrow = dy + (static_cast<size_t>(b) * OH + oh) * OW * OC;
                for (int ow = 0; ow < OW; ++ow) {
                    const T xv = xrow[static_cast<size_t>(ow) * C];
                    const T* dyv = dyrow + static_cast<size_t>(ow) * OC;
                    for (int oc = 0; oc < OC; ++oc) {
                        out[oc] += xv * dyv[oc];
                    }
                }
            }
        }
    }
#pragma omp parallel for schedule(static) if (OC > 1)
    for (int oc = 0; oc < OC; ++oc) {
        T acc{};
        const size_t n = static_cast<size_t>(B) * OH * OW;
        for (size_t i = 0; i < n; ++i) {
            acc += dy[i * OC + oc];
        }
        db[oc] += acc;
    }
}

template <typename T>
void dense_forward(const T* x, int B, int IN, const T* w, const T* bias, int OUT, T* y) {
#pragma omp parallel for schedule(static) if (B > 1)
    for (int b = 0; b < B; ++b) {
        T* out = y + static_cast<size_t>(b) * OUT;
        std::copy(bias, bias + OUT, out);
        const T* xv = x + static_cast<size_t>(b) * IN;
        for (int i = 0; i < IN; ++i) {
            const T xi = xv[i];
            const T* wrow = w + static_cast<size_t>(i) * OUT;
            for (int o = 0; o < OUT; ++o) {
                out[o] += xi * wrow[o];
            }
        }
    }
}

template <typename T>
void dense_backward_input(const T* dy, int B, int IN, const T* w, int OUT, T* dx) {
#pragma omp parallel for schedule(static) if (B > 1)
    for (int b = 0; b < B; ++b) {
        const T* dyv = dy + static_cast<size_t>(b) * OUT;
        T* out = dx + static_cast<size_t>(b) * IN;
        for (int i = 0; i < IN; ++i) {
            T acc{};
            const T* wrow = w + static_cast<size_t>(i) * OUT;
            for (int o = 0; o < OUT; ++o) {
                acc += dyv[o] * wrow[o];
            }
            out[i] = acc;
        }
    }
}

template <typename T>
void dense_backward_params(const T* x, const T* dy, int B, int IN, int OUT, T* dw, T* db) {
#pragma omp parallel for schedule(static) if (IN > 1)
    for (int i = 0; i < IN; ++i) {
        T* out = dw + static_cast<size_t>(i) * OUT;
        for (int b = 0; b < B; ++b) {
            const T xv = x[static_cast<size_t>(b) * IN + i];
            const T* dyv = dy + static_cast<size_t>(b) * OUT;
            for (int o = 0; o < OUT; ++o) {
                out[o] += xv * dyv[o];
            }
        }
    }
    for (int o = 0; o < OUT; ++o) {
        T acc{};
        for (int b = 0; b < B; ++b) {
            acc += dy[static_cast<size_t>(b) * OUT + o];
        }
        db[o] += acc;
    }
}

template <typename T>
void maxpool_forward(const T* x, int B, int H, int W, int C, int window, T* y, int* argmax) {
    const int OH = H / window;
    const int OW = W / window;
#pragma omp parallel for collapse(2) schedule(static) if (static_cast<long>(B) * OH > 1)
    for (int b = 0; b < B; ++b) {
        for (int oh = 0; oh < OH; ++oh) {
            for (int ow = 0; ow < OW; ++ow) {
                for (int c = 0; c < C; ++c) {
                    const size_t out_idx =
                        ((static_cast<size_t>(b) * OH + oh) * OW + ow) * C + c;
                    T best{};
                    int best_idx = -1;
                    for (int dy = 0; dy < window; ++dy) {
                        for (int dx = 0; dx < window; ++dx) {
                            const size_t in_idx =
                                ((static_cast<size_t>(b) * H + oh * window + dy) * W + ow * window +
                                 dx) *
                                    C +
                                c;
                            if (best_idx < 0 || x[in_idx] > best) {
                                best = x[in_idx];
                                best_idx = static_cast<int>(in_idx);
                            }
                        }
                    }
                    y[out_idx] = best;
                    argmax[out_idx] = best_idx;
                }
            }
        }
    }
}

template <typename T>
void maxpool_backward(const T* dy, int B, int H, int W, int C, int window, const int* argmax,
                      T* dx) {
    const int OH = H / window;
    const int OW = W / window;
    std::memset(dx, 0, static_cast<size_t>(B) * H * W * C * sizeof(T));
    const size_t n = static_cast<size_t>(B) * OH * OW * C;
#pragma omp parallel for schedule(static) if (n > 1)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        dx[argmax[i]] = dy[i];
    }
}

namespace serial {

template <typename T>
void conv2d_forward(const T* x, int B, int H, int W, int C, const T* w, const T* bias, int KH,
                    int KW, int OC, T* y) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    for (int b = 0; b < B; ++b)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow)
                for (int oc = 0; oc < OC; ++oc) {
                    T acc = bias[oc];
                    for (int kh = 0; kh < KH; ++kh)
                        for (int kw = 0; kw < KW; ++kw)
                            for (int ic = 0; ic < C; ++ic)
                                acc += x[((static_cast<size_t>(b) * H + oh + kh) * W + ow + kw) *
                                             C +
                                         ic] *
                                       w[((static_cast<size_t>(kh) * KW + kw) * C + ic) * OC + oc];
                    y[((static_cast<size_t>(b) * OH + oh) * OW + ow) * OC + oc] = acc;
                }
}

template <typename T>
void conv2d_backward_input(const T* dy, int B, int H, int W, int C, const T* w, int KH, int KW,
                           int OC, T* dx) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    std::memset(dx, 0, static_cast<size_t>(B) * H * W * C * sizeof(T));
    for (int b = 0; b < B; ++b)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow)
                for (int oc = 0; oc < OC; ++oc) {
                    const T g = dy[((static_cast<size_t>(b) * OH + oh) * OW + ow) * OC + oc];
                    for (int kh = 0; kh < KH; ++kh)
                        for (int kw = 0; kw < KW; ++kw)
                            for (int ic = 0; ic < C; ++ic)
                                dx[((static_cast<size_t>(b) * H + oh + kh) * W + ow + kw) * C +
                                   ic] +=
                                    g * w[((static_cast<size_t>(kh) * KW + kw) * C + ic) * OC + oc];
                }
}

template <typename T>
void conv2d_backward_params(const T* x, const T* dy, int B, int H, int W, int C, int KH, int KW,
                            int OC, T* dw, T* db) {
    const int OH = H - KH + 1;
    const int OW = W - KW + 1;
    for (int b = 0; b < B; ++b)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow)
                for (int oc = 0; oc < OC; ++oc) {
                    const T g = dy[((static_cast<size_t>(b) * OH + oh) * OW + ow) * OC + oc];
                    db[oc] += g;
                    for (int kh = 0; kh < KH; ++kh)
                        for (int kw = 0; kw < KW; ++kw)
                            for (int ic = 0; ic < C; ++ic)
                                dw[((static_cast<size_t>(kh) * KW + kw) * C + ic) * OC + oc] +=
                                    g * x[((static_cast<size_t>(b) * H + oh + kh) * W + ow + kw) *
                                              C +
                                          ic];
                }
}

template <typename T>
void dense_forward(const T* x, int B, int IN, const T* w, const T* bias, int OUT, T* y) {
    for (int b = 0; b < B; ++b)
        for (int o = 0; o < OUT; ++o) {
            T acc = bias[o];
            for (int i = 0; i < IN; ++i)
                acc += x[static_cast<size_t>(b) * IN + i] * w[static_cast<size_t>(i) * OUT + o];
            y[static_cast<size_t>(b) * OUT + o] = acc;
        }
}

template <typename T>
void dense_backward_input(const T* dy, int B, int IN, const T* w, int OUT, T* dx) {
    for (int b = 0; b < B; ++b)
        for (int i = 0; i < IN; ++i) {
            T acc{};
            for (int o = 0; o < OUT; ++o)
                acc += dy[static_cast<size_t>(b) * OUT + o] * w[static_cast<size_t>(i) * OUT + o];
            dx[static_cast<size_t>(b) * IN + i] = acc;
        }
}

template <typename T>
void dense_backward_params(const T* x, const T* dy, int B, int IN, int OUT, T* dw, T* db) {
    for (int b = 0; b < B; ++b) {
        for (int i = 0; i < IN; ++i)
            for (int o = 0; o < OUT; ++o)
                dw[static_cast<size_t>(i) * OUT + o] +=
                    x[static_cast<size_t>(b) * IN + i] * dy[static_cast<size_t>(b) * OUT + o];
        for (int o = 0; o < OUT; ++o)
            db[o] += dy[static_cast<size_t>(b) * OUT + o];
    }
}

template <typename T>
void maxpool_forward(const T* x, int B, int H, int W, int C, int window, T* y, int* argmax) {
    const int OH = H / window;
    const int OW = W / window;
    for (int b = 0; b < B; ++b)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow)
                for (int c = 0; c < C; ++c) {
                    const size_t out_idx = ((static_cast<size_t>(b) * OH + oh) * OW + ow) * C + c;
                    T best{};
                    int best_idx = -1;
                    for (int dy = 0; dy < window; ++dy)
                        for (int dx = 0; dx < window; ++dx) {
                            const size_t in_idx =
                                ((static_cast<size_t>(b) * H + oh * window + dy) * W +
                                 ow * window + dx) *
                                    C +
                                c;
                            if (best_idx < 0 || x[in_idx] > best) {
                                best = x[in_idx];
                                best_idx = static_cast<int>(in_idx);
                            }
                        }
                    y[out_idx] = best;
                    argmax[out_idx] = best_idx;
                }
}

template <typename T>
void maxpool_backward(const T* dy, int B, int H, int W, int C, int window, const int* argmax,
                      T* dx) {
    const int OH = H / window;
    const int OW = W / window;
    std::memset(dx, 0, static_cast<size_t>(B) * H * W * C * sizeof(T));
    const size_t n = static_cast<size_t>(B) * OH * OW * C;
    for (size_t i = 0; i < n; ++i)
        dx[argmax[i]] = dy[i];
}

} // namespace serial

// The model runs in float, the gradient checks in double.
#define EVOPATCH_INSTANTIATE_KERNELS(T)                                                          \
    template void conv2d_forward<T>(const T*, int, int, int, int, const T*, const T*, int, int,  \
                                    int, T*);                                                    \
    template void conv2d_backward_input<T>(const T*, int, int, int, int, const T*, int, int,     \
                                           int, T*);                                             \
    template void conv2d_backward_params<T>(const T*, const T*, int, int, int, int, int, int,    \
                                            int, T*, T*);                                        \
    template void dense_forward<T>(const T*, int, int, const T*, const T*, int, T*);             \
    template void dense_backward_input<T>(const T*, int, int, const T*, int, T*);                \
    template void dense_backward_params<T>(const T*, const T*, int, int, int, T*, T*);           \
    template void maxpool_forward<T>(const T*, int, int, int, int, int, T*, int*);               \
    template void maxpool_backward<T>(const T*, int, int, int, int, int, const int*, T*);        \
    template void serial::conv2d_forward<T>(const T*, int, int, int, int, const T*, const T*,    \
                                            int, int, int, T*);                                  \
    template void serial::conv2d_backward_input<T>(const T*, int, int, int, int, const T*, int,  \
                                                   int, int, T*);                                \
    template void serial::conv2d_backward_params<T>(const T*, const T*, int, int, int, int, int, \
                                                    int, int, T*, T*);                           \
    template void serial::dense_forward<T>(const T*, int, int, const T*, const T*, int, T*);     \
    template void serial::dense_backward_input<T>(const T*, int, int, const T*, int, T*);        \
    template void serial::dense_backward_params<T>(const T*, const T*, int, int, int, T*, T*);   \
    template void serial::maxpool_forward<T>(const T*, int, int, int, int, int, T*, int*);       \
    template void serial::maxpool_backward<T>(const T*, int, int, int, int, int, const int*, T*);

EVOPATCH_INSTANTIATE_KERNELS(float)
EVOPATCH_INSTANTIATE_KERNELS(double)

#undef EVOPATCH_INSTANTIATE_KERNELS

} // namespace evopatch::nn::kernels
