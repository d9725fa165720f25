use crate::error::{Error, Result};

use super::init::init_weights;
use super::kernels::{axpy, axpy_rows, dot};
use super::{Scalar, Tensor};

/// Anything with a forward pass, a backward pass and named parameters.
pub trait Module<T: Scalar> {
    /// Forward pass that caches activations for [`Module::backward`].
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>>;

    /// Forward pass without caching.
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>>;

    /// Accumulates parameter gradients from `grad_output` and, when asked,
    /// returns the gradient with respect to the last forward input.
    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>>;

    fn params(&self) -> Vec<(String, &Tensor<T>)>;

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)>;

    fn zero_grad(&mut self) {
        for (_, p) in self.params_mut() {
            p.zero_grad();
        }
    }

    fn param_count(&self) -> usize {
        self.params().iter().map(|(_, p)| p.len()).sum()
    }
}

fn missing_cache(layer: &str) -> Error {
    Error::ShapeMismatch(format!("{layer}: backward called before forward"))
}

fn expect_shape<T: Scalar>(t: &Tensor<T>, rank: usize, what: &str) -> Result<()> {
    if t.shape().len() != rank {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected rank {rank}, got shape {:?}",
            t.shape()
        )));
    }
    Ok(())
}

/// Fully connected layer, `y = W x + b` with `W` stored as `[out, in]`.
#[derive(Debug, Clone)]
pub struct Linear<T> {
    pub weight: Tensor<T>,
    pub bias: Tensor<T>,
    input: Option<Tensor<T>>,
}

impl<T: Scalar> Linear<T> {
    pub fn new(inputs: usize, outputs: usize, seed: u64) -> Self {
        Self {
            weight: init_weights(&[outputs, inputs], seed),
            bias: Tensor::zeros(vec![outputs]),
            input: None,
        }
    }

    pub fn from_parts(weight: Tensor<T>, bias: Tensor<T>) -> Result<Self> {
        expect_shape(&weight, 2, "linear weight")?;
        if bias.shape() != [weight.shape()[0]] {
            return Err(Error::ShapeMismatch(format!(
                "bias {:?} does not match weight {:?}",
                bias.shape(),
                weight.shape()
            )));
        }
        Ok(Self {
            weight,
            bias,
            input: None,
        })
    }

    pub fn inputs(&self) -> usize {
        self.weight.shape()[1]
    }

    pub fn outputs(&self) -> usize {
        self.weight.shape()[0]
    }

    fn check_input(&self, input: &Tensor<T>) -> Result<()> {
        expect_shape(input, 2, "linear input")?;
        if input.shape()[1] != self.inputs() {
            return Err(Error::ShapeMismatch(format!(
                "linear expects {} inputs, got {:?}",
                self.inputs(),
                input.shape()
            )));
        }
        Ok(())
    }
}

impl<T: Scalar> Module<T> for Linear<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.input = Some(input.clone());
        Ok(out)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        self.check_input(input)?;
        let (batch, n, m) = (input.batch(), self.inputs(), self.outputs());
        let mut out = vec![T::zero(); batch * m];
        let w = self.weight.data();
        let b = self.bias.data();
        let x = input.data();
        for j in 0..m {
            let row = &w[j * n..(j + 1) * n];
            for s in 0..batch {
                out[s * m + j] = dot(row, &x[s * n..(s + 1) * n]) + b[j];
            }
        }
        Tensor::from_vec(vec![batch, m], out)
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let input = self.input.as_ref().ok_or_else(|| missing_cache("linear"))?;
        let (batch, n, m) = (input.batch(), self.inputs(), self.outputs());
        if grad_output.shape() != [batch, m] {
            return Err(Error::ShapeMismatch(format!(
                "linear grad {:?}, expected [{batch}, {m}]",
                grad_output.shape()
            )));
        }
        let g = grad_output.data();
        let x = input.data();
        {
            let gw = self.weight.grad_mut();
            let mut coeff = vec![T::zero(); batch];
            for j in 0..m {
                for (s, c) in coeff.iter_mut().enumerate() {
                    *c = g[s * m + j];
                }
                axpy_rows(&coeff, x, n, &mut gw[j * n..(j + 1) * n]);
            }
        }
        {
            let gb = self.bias.grad_mut();
            for s in 0..batch {
                for j in 0..m {
                    gb[j] = gb[j] + g[s * m + j];
                }
            }
        }
        if !need_input_grad {
            return Ok(None);
        }
        let w = self.weight.data();
        let mut gx = vec![T::zero(); batch * n];
        for j in 0..m {
            let row = &w[j * n..(j + 1) * n];
            for s in 0..batch {
                axpy(g[s * m + j], row, &mut gx[s * n..(s + 1) * n]);
            }
        }
        Tensor::from_vec(vec![batch, n], gx).map(Some)
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        vec![("weight".into(), &self.weight), ("bias".into(), &self.bias)]
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        vec![("weight".into(), &mut self.weight), ("bias".into(), &mut self.bias)]
    }
}

/// 3x3 stride-1 cross-correlation over `[batch, channels, height, width]`
/// with `padding` zero rows/columns on every side.
#[derive(Debug, Clone)]
pub struct Conv2d<T> {
    pub weight: Tensor<T>,
    pub bias: Tensor<T>,
    pub padding: usize,
    input: Option<Tensor<T>>,
}

const KERNEL: usize = 3;

struct ConvGeom {
    batch: usize,
    cin: usize,
    cout: usize,
    h: usize,
    w: usize,
    ho: usize,
    wo: usize,
    pad: usize,
}

impl ConvGeom {
    /// Output rows paired with input rows for kernel row `ky`.
    fn rows(&self, ky: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ho).filter_map(move |oy| {
            let iy = (oy + ky).checked_sub(self.pad)?;
            (iy < self.h).then_some((oy, iy))
        })
    }

    /// Output column range and the input column where it starts, for kernel column `kx`.
    fn cols(&self, kx: usize) -> Option<(usize, usize, usize)> {
        let lo = self.pad.saturating_sub(kx);
        let hi = self.wo.min(self.w + self.pad - kx);
        (lo < hi).then(|| (lo, hi, lo + kx - self.pad))
    }
}

impl<T: Scalar> Conv2d<T> {
    pub fn new(in_channels: usize, out_channels: usize, padding: usize, seed: u64) -> Self {
        Self {
            weight: init_weights(&[out_channels, in_channels, KERNEL, KERNEL], seed),
            bias: Tensor::zeros(vec![out_channels]),
            padding,
            input: None,
        }
    }

    pub fn from_parts(weight: Tensor<T>, bias: Tensor<T>, padding: usize) -> Result<Self> {
        expect_shape(&weight, 4, "conv weight")?;
        if weight.shape()[2..] != [KERNEL, KERNEL] || bias.shape() != [weight.shape()[0]] {
            return Err(Error::ShapeMismatch(format!(
                "conv weight {:?} / bias {:?}",
                weight.shape(),
                bias.shape()
            )));
        }
        Ok(Self {
            weight,
            bias,
            padding,
            input: None,
        })
    }

    pub fn in_channels(&self) -> usize {
        self.weight.shape()[1]
    }

    pub fn out_channels(&self) -> usize {
        self.weight.shape()[0]
    }

    /// Spatial output size for an `h x w` input.
    pub fn output_hw(&self, h: usize, w: usize) -> Option<(usize, usize)> {
        let ho = (h + 2 * self.padding).checked_sub(KERNEL - 1)?;
        let wo = (w + 2 * self.padding).checked_sub(KERNEL - 1)?;
        (ho > 0 && wo > 0).then_some((ho, wo))
    }

    fn geometry(&self, input: &Tensor<T>) -> Result<ConvGeom> {
        expect_shape(input, 4, "conv input")?;
        let s = input.shape();
        if s[1] != self.in_channels() {
            return Err(Error::ShapeMismatch(format!(
                "conv expects {} channels, got {:?}",
                self.in_channels(),
                s
            )));
        }
        let (ho, wo) = self
            .output_hw(s[2], s[3])
            .ok_or_else(|| Error::ShapeMismatch(format!("conv input {s:?} too small")))?;
        Ok(ConvGeom {
            batch: s[0],
            cin: s[1],
            cout: self.out_channels(),
            h: s[2],
            w: s[3],
            ho,
            wo,
            pad: self.padding,
        })
    }
}

impl<T: Scalar> Module<T> for Conv2d<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.input = Some(input.clone());
        Ok(out)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let g = self.geometry(input)?;
        let x = input.data();
        let wt = self.weight.data();
        let (in_plane, out_plane) = (g.h * g.w, g.ho * g.wo);
        let mut out = vec![T::zero(); g.batch * g.cout * out_plane];
        for s in 0..g.batch {
            for co in 0..g.cout {
                let y = &mut out[(s * g.cout + co) * out_plane..][..out_plane];
                y.iter_mut().for_each(|v| *v = self.bias.data()[co]);
                for ci in 0..g.cin {
                    let xp = &x[(s * g.cin + ci) * in_plane..][..in_plane];
                    for ky in 0..KERNEL {
                        for kx in 0..KERNEL {
                            let wv = wt[((co * g.cin + ci) * KERNEL + ky) * KERNEL + kx];
                            let Some((lo, hi, ix)) = g.cols(kx) else { continue };
                            for (oy, iy) in g.rows(ky) {
                                axpy(
                                    wv,
                                    &xp[iy * g.w + ix..][..hi - lo],
                                    &mut y[oy * g.wo + lo..oy * g.wo + hi],
                                );
                            }
                        }
                    }
                }
            }
        }
        Tensor::from_vec(vec![g.batch, g.cout, g.ho, g.wo], out)
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let input = self.input.as_ref().ok_or_else(|| missing_cache("conv2d"))?;
        let g = self.geometry(input)?;
        if grad_output.shape() != [g.batch, g.cout, g.ho, g.wo] {
            return Err(Error::ShapeMismatch(format!(
                "conv grad {:?}, expected [{}, {}, {}, {}]",
                grad_output.shape(),
                g.batch,
                g.cout,
                g.ho,
                g.wo
            )));
        }
        let x = input.data();
        let dy = grad_output.data();
        let (in_plane, out_plane) = (g.h * g.w, g.ho * g.wo);
        {
            let gb = self.bias.grad_mut();
            for s in 0..g.batch {
                for (co, gbc) in gb.iter_mut().enumerate() {
                    let plane = &dy[(s * g.cout + co) * out_plane..][..out_plane];
                    *gbc = *gbc + plane.iter().copied().sum::<T>();
                }
            }
        }
        {
            let gw = self.weight.grad_mut();
            for s in 0..g.batch {
                for co in 0..g.cout {
                    let d = &dy[(s * g.cout + co) * out_plane..][..out_plane];
                    for ci in 0..g.cin {
                        let xp = &x[(s * g.cin + ci) * in_plane..][..in_plane];
                        for ky in 0..KERNEL {
                            for kx in 0..KERNEL {
                                let Some((lo, hi, ix)) = g.cols(kx) else { continue };
                                let mut acc = T::zero();
                                for (oy, iy) in g.rows(ky) {
                                    acc = acc + dot(&d[oy * g.wo + lo..oy * g.wo + hi], &xp[iy * g.w + ix..][..hi - lo]);
                                }
                                let k = ((co * g.cin + ci) * KERNEL + ky) * KERNEL + kx;
                                gw[k] = gw[k] + acc;
                            }
                        }
                    }
                }
            }
        }
        if !need_input_grad {
            return Ok(None);
        }
        let wt = self.weight.data();
        let mut dx = vec![T::zero(); g.batch * g.cin * in_plane];
        for s in 0..g.batch {
            for co in 0..g.cout {
                let d = &dy[(s * g.cout + co) * out_plane..][..out_plane];
                for ci in 0..g.cin {
                    let dxp = &mut dx[(s * g.cin + ci) * in_plane..][..in_plane];
                    for ky in 0..KERNEL {
                        for kx in 0..KERNEL {
                            let wv = wt[((co * g.cin + ci) * KERNEL + ky) * KERNEL + kx];
                            let Some((lo, hi, ix)) = g.cols(kx) else { continue };
                            for (oy, iy) in g.rows(ky) {
                                axpy(wv, &d[oy * g.wo + lo..oy * g.wo + hi], &mut dxp[iy * g.w + ix..][..hi - lo]);
                            }
                        }
                    }
                }
            }
        }
        Tensor::from_vec(vec![g.batch, g.cin, g.h, g.w], dx).map(Some)
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        vec![("weight".into(), &self.weight), ("bias".into(), &self.bias)]
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        vec![("weight".into(), &mut self.weight), ("bias".into(), &mut self.bias)]
    }
}

/// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
/// Ties route the gradient to the first element in row-major window order.
#[derive(Debug, Clone, Default)]
pub struct MaxPool2d {
    argmax: Option<(Vec<usize>, Vec<usize>)>,
}

impl MaxPool2d {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn output_hw(h: usize, w: usize) -> Option<(usize, usize)> {
        (h >= 2 && w >= 2).then_some((h / 2, w / 2))
    }

    fn pool<T: Scalar>(input: &Tensor<T>) -> Result<(Tensor<T>, Vec<usize>)> {
        expect_shape(input, 4, "maxpool input")?;
        let s = input.shape();
        let (b, c, h, w) = (s[0], s[1], s[2], s[3]);
        let (ho, wo) = Self::output_hw(h, w)
            .ok_or_else(|| Error::ShapeMismatch(format!("maxpool input {s:?} too small")))?;
        let x = input.data();
        let mut out = Vec::with_capacity(b * c * ho * wo);
        let mut idx = Vec::with_capacity(b * c * ho * wo);
        for plane in 0..b * c {
            let base = plane * h * w;
            for oy in 0..ho {
                for ox in 0..wo {
                    let mut best = base + 2 * oy * w + 2 * ox;
                    for (dy, dx) in [(0, 1), (1, 0), (1, 1)] {
                        let i = base + (2 * oy + dy) * w + 2 * ox + dx;
                        if x[i] > x[best] {
                            best = i;
                        }
                    }
                    out.push(x[best]);
                    idx.push(best);
                }
            }
        }
        Ok((Tensor::from_vec(vec![b, c, ho, wo], out)?, idx))
    }
}

impl<T: Scalar> Module<T> for MaxPool2d {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let (out, idx) = Self::pool(input)?;
        self.argmax = Some((idx, input.shape().to_vec()));
        Ok(out)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        Self::pool(input).map(|(out, _)| out)
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let (idx, shape) = self.argmax.as_ref().ok_or_else(|| missing_cache("maxpool"))?;
        if grad_output.len() != idx.len() {
            return Err(Error::ShapeMismatch("maxpool grad size".into()));
        }
        if !need_input_grad {
            return Ok(None);
        }
        let mut dx = Tensor::zeros(shape.clone());
        let d = dx.data_mut();
        for (&i, &g) in idx.iter().zip(grad_output.data()) {
            d[i] = d[i] + g;
        }
        Ok(Some(dx))
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        Vec::new()
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        Vec::new()
    }
}

/// `x` for `x > 0`, `alpha (e^x - 1)` otherwise.
#[derive(Debug, Clone)]
pub struct Elu<T> {
    pub alpha: T,
    input: Option<Tensor<T>>,
}

impl<T: Scalar> Elu<T> {
    pub fn new(alpha: T) -> Self {
        Self { alpha, input: None }
    }

    #[inline]
    pub fn apply(&self, x: T) -> T {
        if x > T::zero() {
            x
        } else {
            self.alpha * x.exp_m1()
        }
    }
}

impl<T: Scalar> Default for Elu<T> {
    fn default() -> Self {
        Self::new(T::one())
    }
}

impl<T: Scalar> Module<T> for Elu<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.input = Some(input.clone());
        Ok(out)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        Tensor::from_vec(input.shape().to_vec(), input.data().iter().map(|&x| self.apply(x)).collect())
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let input = self.input.as_ref().ok_or_else(|| missing_cache("elu"))?;
        if !need_input_grad {
            return Ok(None);
        }
        let dx = input
            .data()
            .iter()
            .zip(grad_output.data())
            .map(|(&x, &g)| if x > T::zero() { g } else { g * self.alpha * x.exp() })
            .collect();
        Tensor::from_vec(input.shape().to_vec(), dx).map(Some)
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        Vec::new()
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        Vec::new()
    }
}

/// Elementwise logistic function.
#[derive(Debug, Clone, Default)]
pub struct Sigmoid<T> {
    output: Option<Tensor<T>>,
}

impl<T: Scalar> Sigmoid<T> {
    pub fn new() -> Self {
        Self { output: None }
    }

    #[inline]
    pub fn apply(x: T) -> T {
        if x >= T::zero() {
            T::one() / (T::one() + (-x).exp())
        } else {
            let e = x.exp();
            e / (T::one() + e)
        }
    }
}

impl<T: Scalar> Module<T> for Sigmoid<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.output = Some(out.clone());
        Ok(out)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        Tensor::from_vec(input.shape().to_vec(), input.data().iter().map(|&x| Self::apply(x)).collect())
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let y = self.output.as_ref().ok_or_else(|| missing_cache("sigmoid"))?;
        if !need_input_grad {
            return Ok(None);
        }
        let dx = y
            .data()
            .iter()
            .zip(grad_output.data())
            .map(|(&y, &g)| g * y * (T::one() - y))
            .collect();
        Tensor::from_vec(y.shape().to_vec(), dx).map(Some)
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        Vec::new()
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        Vec::new()
    }
}

/// `[batch, ...]` to `[batch, product(...)]`.
#[derive(Debug, Clone, Default)]
pub struct Flatten {
    shape: Option<Vec<usize>>,
}

impl Flatten {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<T: Scalar> Module<T> for Flatten {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        self.shape = Some(input.shape().to_vec());
        self.infer(input)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let b = input.batch();
        let rest = input.len().checked_div(b).unwrap_or(0);
        Tensor::from_vec(vec![b, rest], input.data().to_vec())
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let shape = self.shape.as_ref().ok_or_else(|| missing_cache("flatten"))?;
        if !need_input_grad {
            return Ok(None);
        }
        Tensor::from_vec(shape.clone(), grad_output.data().to_vec()).map(Some)
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        Vec::new()
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        Vec::new()
    }
}

#[derive(Debug, Clone)]
pub enum Layer<T> {
    Linear(Linear<T>),
    Conv2d(Conv2d<T>),
    MaxPool2d(MaxPool2d),
    Elu(Elu<T>),
    Sigmoid(Sigmoid<T>),
    Flatten(Flatten),
}

macro_rules! dispatch {
    ($self:expr, $l:ident => $e:expr) => {
        match $self {
            Layer::Linear($l) => $e,
            Layer::Conv2d($l) => $e,
            Layer::MaxPool2d($l) => $e,
            Layer::Elu($l) => $e,
            Layer::Sigmoid($l) => $e,
            Layer::Flatten($l) => $e,
        }
    };
}

impl<T: Scalar> Layer<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Layer::Linear(_) => "linear",
            Layer::Conv2d(_) => "conv2d",
            Layer::MaxPool2d(_) => "maxpool2d",
            Layer::Elu(_) => "elu",
            Layer::Sigmoid(_) => "sigmoid",
            Layer::Flatten(_) => "flatten",
        }
    }
}

impl<T: Scalar> Module<T> for Layer<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        dispatch!(self, l => Module::<T>::forward(l, input))
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        dispatch!(self, l => Module::<T>::infer(l, input))
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        dispatch!(self, l => Module::<T>::backward(l, grad_output, need_input_grad))
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        dispatch!(self, l => Module::<T>::params(l))
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        dispatch!(self, l => Module::<T>::params_mut(l))
    }
}

impl<T: Scalar> From<Linear<T>> for Layer<T> {
    fn from(l: Linear<T>) -> Self {
        Layer::Linear(l)
    }
}

impl<T: Scalar> From<Conv2d<T>> for Layer<T> {
    fn from(l: Conv2d<T>) -> Self {
        Layer::Conv2d(l)
    }
}

impl<T: Scalar> From<MaxPool2d> for Layer<T> {
    fn from(l: MaxPool2d) -> Self {
        Layer::MaxPool2d(l)
    }
}

impl<T: Scalar> From<Elu<T>> for Layer<T> {
    fn from(l: Elu<T>) -> Self {
        Layer::Elu(l)
    }
}

impl<T: Scalar> From<Sigmoid<T>> for Layer<T> {
    fn from(l: Sigmoid<T>) -> Self {
        Layer::Sigmoid(l)
    }
}

impl<T: Scalar> From<Flatten> for Layer<T> {
    fn from(l: Flatten) -> Self {
        Layer::Flatten(l)
    }
}

/// Layers applied in order. Parameters are named `<index>.<param>`.
#[derive(Debug, Clone, Default)]
pub struct Sequential<T> {
    pub layers: Vec<Layer<T>>,
}

impl<T: Scalar> Sequential<T> {
    pub fn new() -> Self {
        Self { layers: Vec::new() }
    }

    pub fn push(&mut self, layer: impl Into<Layer<T>>) -> &mut Self {
        self.layers.push(layer.into());
        self
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

impl<T: Scalar> Module<T> for Sequential<T> {
    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let mut x = input.clone();
        for layer in &mut self.layers {
            x = layer.forward(&x)?;
        }
        Ok(x)
    }

    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let mut x = input.clone();
        for layer in &self.layers {
            x = layer.infer(&x)?;
        }
        Ok(x)
    }

    fn backward(&mut self, grad_output: &Tensor<T>, need_input_grad: bool) -> Result<Option<Tensor<T>>> {
        let mut g = grad_output.clone();
        let n = self.layers.len();
        for (i, layer) in self.layers.iter_mut().enumerate().rev() {
            let need = i > 0 || need_input_grad;
            match layer.backward(&g, need)? {
                Some(next) => g = next,
                None if i == 0 => return Ok(None),
                None => unreachable!("layer {i} of {n} returned no input gradient"),
            }
        }
        Ok(Some(g))
    }

    fn params(&self) -> Vec<(String, &Tensor<T>)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.params().into_iter().map(move |(n, p)| (format!("{i}.{n}"), p)))
            .collect()
    }

    fn params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        self.layers
            .iter_mut()
            .enumerate()
            .flat_map(|(i, l)| l.params_mut().into_iter().map(move |(n, p)| (format!("{i}.{n}"), p)))
            .collect()
    }
}
