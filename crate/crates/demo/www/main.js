import init, { separableDip, pulsedSource, beamSplitter } from "./pkg/homdip_demo.js";

const $ = (id) => document.getElementById(id);
const PS = 1e12;
const SOURCE_HALF_WIDTH = 5e12;

function bindOutput(input) {
  const out = input.parentElement.querySelector("output");
  if (out) out.textContent = input.value;
}

// Draws curves sharing the x axis; each curve is {xs, ys, color, dash}.
function plotCurves(canvas, curves, yMax) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const xs = curves[0].xs;
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 1.5 * pad);
  const sy = (y) => h - pad - (y / yMax) * (h - 1.5 * pad);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.strokeRect(pad, pad / 2, w - 1.5 * pad, h - 1.5 * pad);
  for (const y of [0, 0.25, 0.5]) {
    ctx.fillText(y.toFixed(2), 4, sy(y) + 4);
  }
  for (const x of [x0, 0, x1]) {
    ctx.fillText((x * PS).toFixed(1), sx(x) - 10, h - pad + 16);
  }
  ctx.fillText("τ (ps)", w / 2, h - 6);

  for (const c of curves) {
    ctx.strokeStyle = c.color;
    ctx.setLineDash(c.dash ?? []);
    ctx.lineWidth = 2;
    ctx.beginPath();
    c.xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(c.ys[i])) : ctx.moveTo(sx(x), sy(c.ys[i]))));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function plotHeatmap(canvas, values, n) {
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  // Row i is ω₁; draw ω₁ on the horizontal axis and ω₂ upward.
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = values[i * n + j];
      const k = 4 * ((n - 1 - j) * n + i);
      img.data[k] = 255 * Math.min(1, 1.5 * v);
      img.data[k + 1] = 255 * v * v;
      img.data[k + 2] = 80 * (1 - v);
      img.data[k + 3] = 255;
    }
  }
  const tmp = document.createElement("canvas");
  tmp.width = tmp.height = n;
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "white";
  ctx.font = "12px sans-serif";
  ctx.fillText("|f(ω₁, ω₂)|, ω₁ →, ω₂ ↑", 8, 16);
}

function guarded(readout, f) {
  try {
    readout.classList.remove("error");
    f();
  } catch (e) {
    readout.classList.add("error");
    readout.textContent = String(e.message ?? e);
  }
}

function updateSeparable() {
  const readout = $("separable-readout");
  guarded(readout, () => {
    const r = separableDip(
      $("sigma-a").value * PS,
      $("sigma-b").value * PS,
      $("detuning").value * PS,
      10e-12,
      201,
    );
    const xs = r.taus;
    plotCurves(
      $("separable-plot"),
      [
        { xs, ys: r.computed, color: "#1f5fbf" },
        { xs, ys: r.reference, color: "#d04020", dash: [6, 4] },
      ],
      0.55,
    );
    readout.textContent = `visibility ${r.visibility.toFixed(6)}   (blue: quadrature, red dashed: closed form)`;
    r.free();
  });
}

function updateSource() {
  const readout = $("source-readout");
  guarded(readout, () => {
    const nodes = Number($("nodes").value);
    const r = pulsedSource(
      $("shape").value === "gaussian",
      Number($("scale").value),
      Number($("slope").value),
      nodes,
      // Largest sweep the grid resolves: |τ| times the node spacing stays below π/4.
      Math.min(8e-12, (0.75 * (nodes - 1)) / (2 * SOURCE_HALF_WIDTH)),
      101,
    );
    plotHeatmap($("jsa-plot"), r.magnitude, r.nPoints);
    const ps = r.probabilities;
    const top = Math.max(0.55, ...ps);
    plotCurves($("source-plot"), [{ xs: r.taus, ys: ps, color: "#1f5fbf" }], top);
    const u = Array.from(r.coefficients, (c) => c.toFixed(4)).join(" ");
    readout.textContent =
      `purity ${r.purity.toFixed(6)}   visibility ${r.visibility.toFixed(6)}\nSchmidt coefficients: ${u}`;
    r.free();
  });
}

function updateSplitter() {
  const readout = $("splitter-readout");
  guarded(readout, () => {
    const r = beamSplitter(Number($("eta").value), $("same-pol").checked);
    readout.textContent = `p = ${r.probability.toFixed(6)}\n${r.state}`;
    r.free();
  });
}

function wire(ids, update, event = "input") {
  for (const id of ids) {
    const el = $(id);
    bindOutput(el);
    el.addEventListener("input", () => bindOutput(el));
    el.addEventListener(event, () => {
      bindOutput(el);
      update();
    });
  }
  update();
}

await init();
wire(["sigma-a", "sigma-b", "detuning"], updateSeparable);
wire(["shape", "scale", "slope", "nodes"], updateSource, "change");
wire(["eta", "same-pol"], updateSplitter);
