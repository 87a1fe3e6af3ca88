/** Tiny SVG element helpers shared by the views. */

export const SVG_NS = "http://www.w3.org/2000/svg";

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

/** Categorical palette for cluster labels; -1 (noise) renders grey. */
export function clusterColor(label: number | null): string {
  if (label === null) return "#4477aa";
  if (label === -1) return "#bbbbbb";
  const palette = [
    "#4477aa",
    "#ee6677",
    "#228833",
    "#ccbb44",
    "#66ccee",
    "#aa3377",
    "#bb5566",
    "#004488",
  ];
  return palette[((label % palette.length) + palette.length) % palette.length];
}
