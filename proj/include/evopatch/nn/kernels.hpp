#pragma once

namespace evopatch::nn::kernels {

// Dense compute kernels behind the layer implementations. The production
// versions parallelize with OpenMP; every output element is written by
// exactly one iteration with a fixed internal accumulation order, so results
// are bitwise identical for any thread count.
//
// Layouts: activations are NHWC; conv weights w[((kh*KW + kw)*C + ic)*OC + oc]
// with bias[oc]; dense weights w[i*OUT + o] with bias[o]. Valid padding,
// stride 1 for conv; pool stride equals the window.

// y: B x (H-KH+1) x (W-KW+1) x OC
template <typename T>
void conv2d_forward(const T* x, int B, int H, int W, int C, const T* w, const T* bias, int KH,
                    int KW, int OC, T* y);

// dx: B x H x W x C, gathered from dy (B x OH x OW x OC).
template <typename T>
void conv2d_backward_input(const T* dy, int B, int H, int W, int C, const T* w, int KH, int KW,
                           int OC, T* dx);

// Accumulates into dw/db (caller zeroes them once per step).
template <typename T>
void conv2d_backward_params(const T* x, const T* dy, int B, int H, int W, int C, int KH, int KW,
                            int OC, T* dw, T* db);

// y: B x OUT
template <typename T>
void dense_forward(const T* x, int B, int IN, const T* w, const T* bias, int OUT, T* y);

template <typename T>
void dense_backward_input(const T* dy, int B, int IN, const T* w, int OUT, T* dx);

template <typename T>
void dense_backward_params(const T* x, const T* dy, int B, int IN, int OUT, T* dw, T* db);

// argmax records for each output element the linear index into x that won;
// windows never overlap, so the backward scatter touches each dx slot at
// most once.
template <typename T>
void maxpool_forward(const T* x, int B, int H, int W, int C, int window, T* y, int* argmax);

template <typename T>
void maxpool_backward(const T* dy, int B, int H, int W, int C, int window, const int* argmax,
                      T* dx);

// Straight-line textbook implementations; the reference the parallel kernels
// are tested against.
namespace serial {

template <typename T>
void conv2d_forward(const T* x, int B, int H, int W, int C, const T* w, const T* bias, int KH,
                    int KW, int OC, T* y);

template <typename T>
void conv2d_backward_input(const T* dy, int B, int H, int W, int C, const T* w, int KH, int KW,
                           int OC, T* dx);

template <typename T>
void conv2d_backward_params(const T* x, const T* dy, int B, int H, int W, int C, int KH, int KW,
                            int OC, T* dw, T* db);

template <typename T>
void dense_forward(const T* x, int B, int IN, const T* w, const T* bias, int OUT, T* y);

template <typename T>
void dense_backward_input(const T* dy, int B, int IN, const T* w, int OUT, T* dx);

template <typename T>
void dense_backward_params(const T* x, const T* dy, int B, int IN, int OUT, T* dw, T* db);

template <typename T>
void maxpool_forward(const T* x, int B, int H, int W, int C, int window, T* y, int* argmax);

template <typename T>
void maxpool_backward(const T* dy, int B, int H, int W, int C, int window, const int* argmax,
                      T* dx);

} // namespace serial

} // namespace evopatch::nn::kernels
