/** Dependency-free SVG line chart.
 *
 * buildChart is a pure function from data series to SVG markup plus the
 * scaled pixel paths, so geometry (ordering, non-crossing, marker
 * placement) is testable without a DOM.
 */

export interface SeriesPoint {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

export interface Marker {
  label: string;
  x: number;
  y: number;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  padding?: number;
  xLabel?: string;
  yLabel?: string;
  markers?: Marker[];
}

export interface RenderedSeries {
  label: string;
  color: string;
  /** Pixel-space path, same order as the input points. */
  path: { px: number; py: number }[];
}

export interface RenderedChart {
  svg: string;
  series: RenderedSeries[];
  xDomain: [number, number];
  yDomain: [number, number];
}

const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function domain(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const margin = (hi - lo) * 0.05;
  return [lo - margin, hi + margin];
}

export function buildChart(series: Series[], options: ChartOptions = {}): RenderedChart {
  const width = options.width ?? 560;
  const height = options.height ?? 320;
  const padding = options.padding ?? 44;
  const markers = options.markers ?? [];

  const xs = series.flatMap((s) => s.points.map((p) => p.x)).concat(markers.map((m) => m.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y)).concat(markers.map((m) => m.y));
  if (xs.length === 0) {
    return {
      svg: `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"></svg>`,
      series: [],
      xDomain: [0, 1],
      yDomain: [0, 1],
    };
  }

  const [x0, x1] = domain(xs);
  const [y0, y1] = domain(ys);
  const sx = (x: number) => padding + ((x - x0) / (x1 - x0)) * (width - 2 * padding);
  const sy = (y: number) => height - padding - ((y - y0) / (y1 - y0)) * (height - 2 * padding);

  const rendered: RenderedSeries[] = series.map((s, i) => ({
    label: s.label,
    color: PALETTE[i % PALETTE.length] ?? "#000",
    path: s.points.map((p) => ({ px: sx(p.x), py: sy(p.y) })),
  }));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" class="chart">`,
  );
  // axes
  parts.push(
    `<line x1="${padding}" y1="${height - padding}" x2="${width - padding}" ` +
      `y2="${height - padding}" stroke="#374151"/>`,
    `<line x1="${padding}" y1="${padding}" x2="${padding}" ` +
      `y2="${height - padding}" stroke="#374151"/>`,
  );
  // tick labels (ends of each axis, 2-decimal display convention)
  const tick = (v: number) => v.toFixed(2);
  parts.push(
    `<text x="${padding}" y="${height - padding + 16}" font-size="10">${tick(x0)}</text>`,
    `<text x="${width - padding}" y="${height - padding + 16}" font-size="10" ` +
      `text-anchor="end">${tick(x1)}</text>`,
    `<text x="${padding - 4}" y="${height - padding}" font-size="10" ` +
      `text-anchor="end">${tick(y0)}</text>`,
    `<text x="${padding - 4}" y="${padding + 4}" font-size="10" ` +
      `text-anchor="end">${tick(y1)}</text>`,
  );
  if (options.xLabel) {
    parts.push(
      `<text x="${width / 2}" y="${height - 6}" font-size="11" ` +
        `text-anchor="middle">${escapeXml(options.xLabel)}</text>`,
    );
  }
  if (options.yLabel) {
    parts.push(
      `<text x="12" y="${height / 2}" font-size="11" text-anchor="middle" ` +
        `transform="rotate(-90 12 ${height / 2})">${escapeXml(options.yLabel)}</text>`,
    );
  }

  rendered.forEach((s, i) => {
    const points = s.path.map((p) => `${p.px.toFixed(2)},${p.py.toFixed(2)}`).join(" ");
    parts.push(
      `<polyline fill="none" stroke="${s.color}" stroke-width="2" ` +
        `data-series="${escapeXml(s.label)}" points="${points}"/>`,
    );
    // one full-precision tooltip per point
    s.path.forEach((p, j) => {
      const source = series[i]?.points[j];
      if (!source) return;
      parts.push(
        `<circle cx="${p.px.toFixed(2)}" cy="${p.py.toFixed(2)}" r="3" ` +
          `fill="${s.color}"><title>${escapeXml(s.label)}: x=${source.x}, ` +
          `y=${source.y}</title></circle>`,
      );
    });
    parts.push(
      `<text x="${width - padding}" y="${padding + 14 * (i + 1)}" font-size="11" ` +
        `text-anchor="end" fill="${s.color}">${escapeXml(s.label)}</text>`,
    );
  });

  for (const marker of markers) {
    parts.push(
      `<g data-marker="${escapeXml(marker.label)}">` +
        `<circle cx="${sx(marker.x).toFixed(2)}" cy="${sy(marker.y).toFixed(2)}" r="5" ` +
        `fill="none" stroke="#111827" stroke-width="2">` +
        `<title>${escapeXml(marker.label)}: ${marker.y}</title></circle>` +
        `<text x="${(sx(marker.x) + 8).toFixed(2)}" y="${(sy(marker.y) - 8).toFixed(2)}" ` +
        `font-size="10">${escapeXml(marker.label)} (${marker.y.toFixed(2)})</text></g>`,
    );
  }

  parts.push("</svg>");
  return { svg: parts.join(""), series: rendered, xDomain: [x0, x1], yDomain: [y0, y1] };
}
