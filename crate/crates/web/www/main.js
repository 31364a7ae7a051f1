import init, { phase_map, onset_line, critical_flux, order_curve, current_vs_theta } from "./pkg/tdt_web.js";

const COLORS = [[232, 232, 232], [74, 127, 193], [217, 102, 60]];
const num = (id) => parseFloat(document.getElementById(id).value);
const status = document.getElementById("status");

function timed(label, f) {
  const t0 = performance.now();
  try {
    f();
    status.textContent = `${label}: ${(performance.now() - t0).toFixed(0)} ms`;
  } catch (e) {
    status.textContent = `${label}: ${e}`;
  }
}

function axes(ctx, w, h, xr, yr) {
  const pad = 30;
  const sx = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0])) * (w - pad - 5);
  const sy = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - pad - 5);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 5, w - pad - 5, h - pad - 5);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(2), pad, h - 12);
  ctx.fillText(xr[1].toFixed(2), w - 35, h - 12);
  ctx.fillText(yr[1].toFixed(2), 0, 14);
  ctx.fillText(yr[0].toFixed(2), 0, h - pad);
  return [sx, sy];
}

function polyline(ctx, pts, sx, sy, dash = []) {
  ctx.setLineDash(dash);
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawMap() {
  const gamma = num("map-gamma"), j = num("map-j"), lmax = num("map-lmax");
  const n = Math.round(num("map-res"));
  const lmin = 0.05;
  const codes = phase_map(gamma, j, lmin, lmax, n, n);
  const canvas = document.getElementById("map");
  const ctx = canvas.getContext("2d");
  const [sx, sy] = axes(ctx, canvas.width, canvas.height, [-Math.PI, Math.PI], [lmin, lmax]);
  const cw = (sx(Math.PI) - sx(-Math.PI)) / n, ch = (sy(lmin) - sy(lmax)) / n;
  for (let i = 0; i < n; i++) {
    for (let k = 0; k < n; k++) {
      const [r, g, b] = COLORS[codes[i * n + k]];
      ctx.fillStyle = `rgb(${r},${g},${b})`;
      ctx.fillRect(sx(-Math.PI) + k * cw, sy(lmin) - (i + 1) * ch, cw + 0.5, ch + 0.5);
    }
  }
  const steps = 200;
  const onset = onset_line(gamma, j, steps);
  const pts = Array.from(onset, (l, k) => [-Math.PI + (2 * Math.PI * k) / (steps - 1), Math.min(l, lmax)]);
  ctx.strokeStyle = "#000";
  polyline(ctx, pts, sx, sy);
}

function drawCurve() {
  const gamma = num("oc-gamma"), theta = num("oc-theta"), j = num("oc-j");
  const data = order_curve(gamma, theta, j, 0.05, 1.5, 200);
  const pts = [], hs = [];
  for (let i = 0; i < data.length; i += 5) {
    pts.push([data[i], Math.max(data[i + 1], data[i + 2], data[i + 3])]);
    hs.push([data[i], data[i + 4]]);
  }
  const canvas = document.getElementById("curve");
  const ctx = canvas.getContext("2d");
  const ymax = Math.max(1, ...pts.map((p) => p[1]));
  const [sx, sy] = axes(ctx, canvas.width, canvas.height, [0.05, 1.5], [-1, ymax]);
  ctx.strokeStyle = "#4a7fc1";
  polyline(ctx, pts, sx, sy);
  ctx.strokeStyle = "#d9663c";
  polyline(ctx, hs, sx, sy, [5, 4]);
}

function drawCurrent() {
  const lambda = num("cur-lambda"), gamma = num("cur-gamma"), j = num("cur-j");
  const data = current_vs_theta(lambda, gamma, j, 241);
  const pts = [];
  for (let i = 0; i < data.length; i += 2) pts.push([data[i], data[i + 1]]);
  const ymax = Math.max(1e-3, ...pts.map((p) => Math.abs(p[1])));
  const canvas = document.getElementById("current");
  const ctx = canvas.getContext("2d");
  const [sx, sy] = axes(ctx, canvas.width, canvas.height, [-Math.PI, Math.PI], [-ymax, ymax]);
  ctx.strokeStyle = "#333";
  polyline(ctx, pts, sx, sy);
  const tc = critical_flux(j);
  ctx.strokeStyle = "#999";
  for (const t of [-tc, tc]) polyline(ctx, [[t, -ymax], [t, ymax]], sx, sy, [2, 3]);
}

await init();
status.textContent = "ready";
document.getElementById("map-go").onclick = () => timed("phase map", drawMap);
document.getElementById("oc-go").onclick = () => timed("order curve", drawCurve);
document.getElementById("cur-go").onclick = () => timed("current", drawCurrent);
timed("phase map", drawMap);
