import init, { paramagnet_curve, twoband_zone, twoband_sweep } from "./pkg/qgt_wasm.js";

const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c"];
const ZONE_N = 48;

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad / 2, w - 1.5 * pad, h - 1.5 * pad);
}

function lineChart(canvas, xs, series, { logX = true, dashed = [] } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  axes(ctx, w, h, pad);
  const fx = logX ? Math.log10 : (x) => x;
  const x0 = fx(xs[0]), x1 = fx(xs[xs.length - 1]);
  const all = series.flatMap((s) => s.values).concat(dashed).filter(Number.isFinite);
  let y0 = Math.min(0, ...all), y1 = Math.max(...all);
  if (y1 === y0) y1 = y0 + 1;
  const px = (x) => pad + ((fx(x) - x0) / (x1 - x0)) * (w - 1.5 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 1.5 * pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    if (s.dots) {
      xs.forEach((x, i) => ctx.fillRect(px(x) - 1.5, py(s.values[i]) - 1.5, 3, 3));
      continue;
    }
    ctx.beginPath();
    xs.forEach((x, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, px(x), py(s.values[i])));
    ctx.stroke();
  }
  ctx.setLineDash([5, 4]);
  dashed.forEach((y, i) => {
    ctx.strokeStyle = COLORS[i];
    ctx.beginPath();
    ctx.moveTo(pad, py(y));
    ctx.lineTo(w - pad / 2, py(y));
    ctx.stroke();
  });
  ctx.setLineDash([]);
  ctx.fillStyle = "#444";
  ctx.fillText(y1.toPrecision(3), 2, py(y1) + 4);
  ctx.fillText(y0.toPrecision(3), 2, py(y0));
  ctx.fillText(xs[0].toPrecision(2), pad, h - pad + 14);
  ctx.fillText(xs[xs.length - 1].toPrecision(2), w - pad, h - pad + 14);
}

function columns(flat, width) {
  const rows = flat.length / width;
  return Array.from({ length: width }, (_, c) => Array.from({ length: rows }, (_, r) => flat[r * width + c]));
}

function drawParamagnet() {
  const theta = Number(document.getElementById("pm-theta").value);
  document.getElementById("pm-theta-out").textContent = theta.toFixed(2);
  const [t, gtt, gpp, exact] = columns(paramagnet_curve(theta, 1.0, 0.01, 5.0, 120), 4);
  lineChart(document.getElementById("pm-plot"), t, [
    { values: gtt, color: COLORS[0] },
    { values: gpp, color: COLORS[1] },
    { values: exact, color: "#000", dots: true },
  ]);
}

function heat(v, lo, hi) {
  const s = hi > lo ? (v - lo) / (hi - lo) : 0.5;
  const r = Math.round(255 * Math.min(1, 2 * s));
  const b = Math.round(255 * Math.min(1, 2 * (1 - s)));
  return `rgb(${r},${Math.round(120 * (1 - Math.abs(2 * s - 1)))},${b})`;
}

function drawZone() {
  const t = 10 ** Number(document.getElementById("bz-t").value);
  document.getElementById("bz-t-out").textContent = t.toPrecision(3);
  const comp = Number(document.getElementById("bz-comp").value);
  const data = twoband_zone(1.0, t, ZONE_N);
  const vals = Array.from({ length: ZONE_N * ZONE_N }, (_, i) => data[3 * i + comp]);
  const finite = vals.filter(Number.isFinite);
  const lo = Math.min(...finite), hi = Math.max(...finite);
  const canvas = document.getElementById("bz-plot");
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / ZONE_N;
  for (let i = 0; i < ZONE_N; i++) {
    for (let j = 0; j < ZONE_N; j++) {
      const v = vals[i * ZONE_N + j];
      ctx.fillStyle = Number.isFinite(v) ? heat(v, lo, hi) : "#999";
      // kx to the right, ky upward
      ctx.fillRect(i * cell, canvas.height - (j + 1) * cell, cell, cell);
    }
  }
}

function drawSweep(kx, ky) {
  document.getElementById("sw-k").textContent = `(${kx.toFixed(2)}, ${ky.toFixed(2)})`;
  const flat = twoband_sweep(kx, ky, 1.0, 0.005, 5.0, 80);
  const fs = Array.from(flat.slice(0, 3));
  const [t, gxx, gyy, gxy] = columns(flat.slice(3), 4);
  lineChart(
    document.getElementById("sw-plot"),
    t,
    [gxx, gyy, gxy].map((values, i) => ({ values, color: COLORS[i] })),
    { dashed: fs },
  );
}

await init();
for (const id of ["pm-theta"]) document.getElementById(id).addEventListener("input", drawParamagnet);
for (const id of ["bz-t", "bz-comp"]) document.getElementById(id).addEventListener("input", drawZone);
document.getElementById("bz-plot").addEventListener("click", (ev) => {
  const c = ev.currentTarget;
  const i = Math.floor((ev.offsetX / c.width) * ZONE_N);
  const j = ZONE_N - 1 - Math.floor((ev.offsetY / c.height) * ZONE_N);
  const k = (n) => -Math.PI + (2 * Math.PI * n) / ZONE_N;
  drawSweep(k(i), k(j));
});
drawParamagnet();
drawZone();
drawSweep(0.6, -0.9);
