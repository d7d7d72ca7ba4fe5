"""Walk through one LSTM cell step and verify its gradients numerically.

Run from the repository root:

    python3 demos/cell_mechanics.py

The first part pushes a single input through a cell whose weights are all 1
and biases all 0, so every number can be checked on paper. The second part
draws a random small network and compares every analytic gradient against a
central finite difference.
"""

import numpy as np

from seqcast.cell import CellParameters, cell_forward, zero_state
from seqcast.mathops import sigmoid
from seqcast.network import backward_sequence, forward_sequence, init_network
from seqcast.training import mse_loss

# --- part 1: a cell you can evaluate by hand -------------------------------

one = np.ones((1, 2))
params = CellParameters(
    w_f=one.copy(), w_i=one.copy(), w_c=one.copy(), w_o=one.copy(),
    b_f=np.zeros(1), b_i=np.zeros(1), b_c=np.zeros(1), b_o=np.zeros(1),
    input_dim=1, hidden_dim=1,
)

x = np.array([0.5])
state, cache = cell_forward(x, zero_state(1), params)

# With h_prev = 0 and all weights 1, every gate pre-activation is just x,
# so each gate equals sigmoid(0.5) and the candidate equals tanh(0.5).
print("input x                :", x[0])
print("forget gate f          :", cache.f[0], "(= sigmoid(0.5) =", sigmoid(0.5), ")")
print("input gate i           :", cache.i[0])
print("output gate o          :", cache.o[0])
print("candidate tanh         :", cache.cand[0])
print("new cell state c = i*cand      :", state.c[0])
print("new hidden h = o * tanh(c)     :", state.h[0])

# The forget gate only matters once there is a previous cell state. Feed the
# same input again and watch c blend the old state with the new candidate.
state2, cache2 = cell_forward(x, state, params)
blended = cache2.f[0] * state.c[0] + cache2.i[0] * cache2.cand[0]
print("\nsecond step c          :", state2.c[0])
print("check f*c_old + i*cand :", blended)

# --- part 2: analytic gradients vs finite differences ----------------------

print("\ngradient check on a random network (hidden 3, window 4)")
rng = np.random.default_rng(0)
p = init_network(input_dim=1, hidden_dim=3, seed=7)
window = rng.uniform(0.1, 0.9, size=4)
target = 0.55

prediction, net_cache = forward_sequence(window, p)
loss, d_prediction = mse_loss(prediction, target)
grads = backward_sequence(d_prediction, net_cache, p)
named = dict(grads.arrays())

step = 1e-5
worst = 0.0
for name, arr in p.arrays():
    grad = named[name]
    it = np.nditer(arr, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        kept = arr[idx]
        arr[idx] = kept + step
        up = mse_loss(forward_sequence(window, p)[0], target)[0]
        arr[idx] = kept - step
        down = mse_loss(forward_sequence(window, p)[0], target)[0]
        arr[idx] = kept
        numeric = (up - down) / (2 * step)
        analytic = float(grad[idx])
        scale = max(abs(analytic), abs(numeric), 1e-10)
        worst = max(worst, abs(analytic - numeric) / scale)

print(f"prediction {prediction:.6f}, loss {loss:.6f}")
print(f"worst relative error across all {sum(a.size for _, a in p.arrays())} "
      f"parameters: {worst:.3e}")
