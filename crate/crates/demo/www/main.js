// Built by wasm-bindgen --target web into ./pkg (see the README).
import init, { baseline_defaults, check_point, q_profile, z_profile, p_heatmap } from "./pkg/cnlse_demo.js";

const $ = (id) => document.getElementById(id);
const form = $("params");
const X_RANGE = [-0.8, 3.2];
const PROFILE_N = 600;

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function loadDefaults() {
  const p = JSON.parse(baseline_defaults());
  for (const k of ["q", "c1", "c2", "c3", "z0", "q0", "phi0"]) form.elements[k].value = p[k];
  form.elements.branch.value = `${p.sigma_z},${p.sigma_q}`;
}

function params() {
  const p = {};
  for (const k of ["q", "c1", "c2", "c3", "z0", "q0", "phi0"]) p[k] = Number(form.elements[k].value);
  const [sz, sq] = form.elements.branch.value.split(",").map(Number);
  p.sigma_z = sz;
  p.sigma_q = sq;
  return JSON.stringify(p);
}

function fmt(v) {
  return v === null ? "n/a" : v.toExponential(6);
}

function runCheck() {
  try {
    const rows = JSON.parse(check_point(params(), Number($("px").value), Number($("pt").value)));
    const sign = (s) => (s > 0 ? "+" : "-");
    $("table").innerHTML =
      "<tr><th>branch</th><th>P</th><th>r1</th><th>r2</th><th>flags</th></tr>" +
      rows
        .map((r) => `<tr><td>(${sign(r.sigma_z)},${sign(r.sigma_q)})</td><td>${fmt(r.P)}</td>` +
          `<td>${fmt(r.r1)}</td><td>${fmt(r.r2)}</td><td>${r.notes}</td></tr>`)
        .join("");
    showError(null);
  } catch (e) {
    showError(e);
  }
}

// Draws ys against an even grid, breaking the line at NaN and at jumps
// through a pole.
function drawLine(ctx, ys, lo, hi, color) {
  const { width, height } = ctx.canvas;
  const toY = (v) => height - ((v - lo) / (hi - lo)) * height;
  ctx.strokeStyle = color;
  ctx.beginPath();
  let pen = false;
  ys.forEach((v, i) => {
    const x = (i / (ys.length - 1)) * width;
    if (!Number.isFinite(v) || v < lo - (hi - lo) || v > hi + (hi - lo)) {
      pen = false;
      return;
    }
    pen ? ctx.lineTo(x, toY(v)) : ctx.moveTo(x, toY(v));
    pen = true;
  });
  ctx.stroke();
}

function robustRange(ys) {
  const v = ys.filter(Number.isFinite).sort((a, b) => a - b);
  if (v.length === 0) return [-1, 1];
  const lo = v[Math.floor(v.length * 0.05)];
  const hi = v[Math.floor(v.length * 0.95)];
  const pad = Math.max(hi - lo, 1e-6) * 0.2;
  return [lo - pad, hi + pad];
}

function runProfile() {
  const t = Number($("slice-t").value);
  $("slice-t-val").textContent = t.toFixed(2);
  const ctx = $("profile").getContext("2d");
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  try {
    const p = params();
    const z = Array.from(z_profile(p, 1, PROFILE_N));
    const [zlo, zhi] = robustRange(z);
    drawLine(ctx, z, zlo, zhi, "#999");
    const q = Array.from(q_profile(p, t, X_RANGE[0], X_RANGE[1], PROFILE_N));
    const [lo, hi] = robustRange(q);
    drawLine(ctx, q, lo, hi, "#1f5fbf");
    ctx.fillStyle = "#333";
    ctx.fillText(`Q in [${lo.toPrecision(3)}, ${hi.toPrecision(3)}]`, 6, 14);
    showError(null);
  } catch (e) {
    showError(e);
  }
}

function runHeatmap() {
  const canvas = $("heatmap");
  const ctx = canvas.getContext("2d");
  const nx = 96;
  const nt = 96;
  try {
    const started = performance.now();
    const values = p_heatmap(params(), Number($("hx0").value), Number($("hx1").value), nx,
      Number($("ht0").value), Number($("ht1").value), nt);
    const img = ctx.createImageData(nx, nt);
    const finite = Array.from(values).filter(Number.isFinite).map(Math.abs);
    const top = Math.log10(1 + Math.max(...finite, 1e-12) / 1e-3);
    values.forEach((v, i) => {
      // Row 0 is the smallest t; put it at the bottom.
      const row = nt - 1 - Math.floor(i / nx);
      const o = 4 * (row * nx + (i % nx));
      const s = Number.isFinite(v) ? Math.log10(1 + Math.abs(v) / 1e-3) / top : -1;
      const c = Math.round(255 * (1 - Math.max(s, 0)));
      const rgb = s < 0 ? [0, 0, 0] : v > 0 ? [255, c, c] : [c, c, 255];
      img.data.set([...rgb, 255], o);
    });
    const tmp = new OffscreenCanvas(nx, nt);
    tmp.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
    const maxAbs = finite.length ? Math.max(...finite) : NaN;
    $("heat-info").textContent =
      `${nx}x${nt} points, max |P| = ${maxAbs.toExponential(3)}, ${(performance.now() - started).toFixed(0)} ms`;
    showError(null);
  } catch (e) {
    showError(e);
  }
}

await init();
loadDefaults();
$("reset").addEventListener("click", (ev) => {
  ev.preventDefault();
  loadDefaults();
  runCheck();
  runProfile();
});
$("check").addEventListener("click", runCheck);
$("slice-t").addEventListener("input", runProfile);
$("heat").addEventListener("click", runHeatmap);
form.addEventListener("change", () => {
  runCheck();
  runProfile();
});
runCheck();
runProfile();
runHeatmap();
