import init, { polynomial_curves, cf_compare, chaos_isometry } from "./pkg/levy_chaos_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f"];

function measure() {
  return { zero_weight: Number($("zero").value), atoms: JSON.parse($("atoms").value) };
}

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

function axes(ctx, w, h, xr, yr) {
  const sx = (x) => 40 + ((x - xr[0]) / (xr[1] - xr[0])) * (w - 50);
  const sy = (y) => h - 20 - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 30);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(sx(xr[0]), sy(0));
  ctx.lineTo(sx(xr[1]), sy(0));
  ctx.moveTo(sx(0), sy(yr[0]));
  ctx.lineTo(sx(0), sy(yr[1]));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(xr[0].toFixed(2), sx(xr[0]), h - 5);
  ctx.fillText(xr[1].toFixed(2), sx(xr[1]) - 30, h - 5);
  ctx.fillText(yr[1].toFixed(2), 2, sy(yr[1]) + 10);
  ctx.fillText(yr[0].toFixed(2), 2, sy(yr[0]));
  return [sx, sy];
}

function line(ctx, xs, ys, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
}

function drawCurves() {
  const out = JSON.parse(polynomial_curves(JSON.stringify({ measure: measure(), order: Number($("order").value) })));
  const c = $("curves");
  const ctx = c.getContext("2d");
  // clip the vertical range so low degrees stay readable
  const all = out.curves.flatMap((cv) => cv.ys);
  const lim = Math.min(6, Math.max(...all.map(Math.abs)));
  const [sx, sy] = axes(ctx, c.width, c.height, [out.xs[0], out.xs[out.xs.length - 1]], [-lim, lim]);
  out.curves.forEach((cv, i) => {
    const ys = cv.ys.map((y) => Math.max(-lim, Math.min(lim, y)));
    line(ctx, out.xs, ys, sx, sy, COLORS[i % COLORS.length]);
    ctx.fillStyle = COLORS[i % COLORS.length];
    ctx.fillText(`q${cv.k}`, c.width - 40, 15 + 14 * i);
  });
  ctx.fillStyle = "#000";
  for (const [s] of out.atoms) ctx.fillRect(sx(s) - 2, sy(0) - 2, 4, 4);

  const rows = out.gamma.map((g, n) =>
    `<tr><td>${n}</td><td>${out.b[n]?.toPrecision(6) ?? ""}</td><td>${n ? out.a[n - 1].toPrecision(6) : ""}</td><td>${g.toPrecision(6)}</td></tr>`);
  $("curves-table").innerHTML =
    `<p>support size ${out.support_size ?? "infinite"}</p><table><tr><th>n</th><th>b_n</th><th>a_n</th><th>gamma_n</th></tr>${rows.join("")}</table>`;
}

function drawCf() {
  const input = {
    measure: measure(),
    volumes: JSON.parse($("volumes").value),
    phi: JSON.parse($("phi").value),
    samples: Number($("cf-samples").value),
    seed: Number($("cf-seed").value),
  };
  const out = JSON.parse(cf_compare(JSON.stringify(input)));
  const c = $("cf");
  const ctx = c.getContext("2d");
  const th = out.points.map((p) => p.theta);
  const [sx, sy] = axes(ctx, c.width, c.height, [th[0], th[th.length - 1]], [-1.05, 1.05]);
  line(ctx, th, out.points.map((p) => p.exact[0]), sx, sy, COLORS[0]);
  line(ctx, th, out.points.map((p) => p.exact[1]), sx, sy, COLORS[1]);
  for (const p of out.points) {
    ctx.fillStyle = p.pass ? "#000" : "#b00";
    ctx.fillRect(sx(p.theta) - 2, sy(p.estimate[0]) - 2, 4, 4);
    ctx.fillRect(sx(p.theta) - 2, sy(p.estimate[1]) - 2, 4, 4);
  }
  ctx.fillStyle = COLORS[0];
  ctx.fillText("Re (closed form)", c.width - 120, 15);
  ctx.fillStyle = COLORS[1];
  ctx.fillText("Im (closed form)", c.width - 120, 29);
  const failed = out.points.filter((p) => !p.pass).length;
  $("cf-summary").textContent =
    `${out.points.length - failed}/${out.points.length} grid points within 3 standard errors (dots: Monte Carlo)`;
}

function runIsometry() {
  const input = {
    measure: measure(),
    cells: Number($("iso-cells").value),
    samples: Number($("iso-samples").value),
    seed: Number($("iso-seed").value),
  };
  const out = JSON.parse(chaos_isometry(JSON.stringify(input)));
  const rows = out.rows.map((r) =>
    `<tr class="${r.pass ? "" : "fail"}"><td style="text-align:left">${r.quantity}</td><td>${r.target.toPrecision(6)}</td>` +
    `<td>${r.estimate.toPrecision(6)}</td><td>${r.stderr.toPrecision(3)}</td><td>${r.pass ? "pass" : "fail"}</td></tr>`);
  $("iso").innerHTML =
    `<table><tr><th>quantity</th><th>target</th><th>estimate</th><th>stderr</th><th></th></tr>${rows.join("")}</table>`;
}

await init();
$("run-curves").onclick = guarded(drawCurves);
$("run-cf").onclick = guarded(drawCf);
$("run-iso").onclick = guarded(runIsometry);
guarded(drawCurves)();
