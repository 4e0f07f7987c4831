import type { Highlight } from "./controller.js";
import { STAGE_LABELS, VizDocument, VizNode } from "./types.js";

// d3 is loaded as a UMD bundle from a script tag; the renderer is the only
// module that touches it.
declare const d3: any;

interface SimNode extends VizNode {
  x: number;
  y: number;
}

/** 32-bit FNV-1a, used to derive the layout seed from the corpus bytes. */
export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** Deterministic PRNG (mulberry32) so layouts are stable for screenshots. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) | 0;
    let t = Math.imul(state ^ (state >>> 15), 1 | state);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const NODE_RADIUS = { large: 11, small: 6 } as const;
const TICKS = 300;

/**
 * Static force-directed rendering of the viz document. Colors and sizes are
 * taken from the document verbatim; stage colors are never recomputed here.
 * The simulation runs a fixed number of ticks with a seeded random source,
 * so the same corpus always yields the same picture.
 */
export class GraphRenderer {
  private nodes: SimNode[];
  private links: { source: SimNode; target: SimNode; kind: string }[];
  private nodeSel: any;
  private linkSel: any;
  private labelSel: any;

  constructor(
    svgElement: SVGSVGElement,
    doc: VizDocument,
    onNodeClick: (id: string) => void
  ) {
    const rng = mulberry32(fnv1a(JSON.stringify(doc)));
    const width = svgElement.clientWidth || 960;
    const height = svgElement.clientHeight || 720;

    const byId = new Map<string, SimNode>();
    this.nodes = doc.nodes.map((node, i) => {
      const angle = 2 * Math.PI * (i / Math.max(1, doc.nodes.length));
      const radius = (0.25 + 0.65 * rng()) * Math.min(width, height) * 0.5;
      const sim: SimNode = {
        ...node,
        x: width / 2 + radius * Math.cos(angle),
        y: height / 2 + radius * Math.sin(angle),
      };
      byId.set(node.id, sim);
      return sim;
    });
    this.links = doc.edges.map((edge) => ({
      source: byId.get(edge.from)!,
      target: byId.get(edge.to)!,
      kind: edge.kind,
    }));

    const simulation = d3
      .forceSimulation(this.nodes)
      .randomSource(rng)
      .force("link", d3.forceLink(this.links).distance(46).strength(0.4))
      .force("charge", d3.forceManyBody().strength(-85))
      .force("center", d3.forceCenter(width / 2, height / 2))
      .force(
        "collide",
        d3.forceCollide().radius((d: SimNode) => NODE_RADIUS[d.size] + 2)
      )
      .stop();
    for (let i = 0; i < TICKS; i++) simulation.tick();

    const svg = d3.select(svgElement);
    svg.selectAll("*").remove();
    const zoomLayer = svg.append("g").attr("class", "zoom-layer");
    svg.call(
      d3.zoom().scaleExtent([0.2, 6]).on("zoom", (event: any) => {
        zoomLayer.attr("transform", event.transform);
      })
    );

    this.linkSel = zoomLayer
      .append("g")
      .attr("class", "links")
      .selectAll("line")
      .data(this.links)
      .join("line")
      .attr("class", (d: any) => `link kind-${d.kind}`)
      .attr("x1", (d: any) => d.source.x)
      .attr("y1", (d: any) => d.source.y)
      .attr("x2", (d: any) => d.target.x)
      .attr("y2", (d: any) => d.target.y);

    this.nodeSel = zoomLayer
      .append("g")
      .attr("class", "nodes")
      .selectAll("circle")
      .data(this.nodes)
      .join("circle")
      .attr("class", "node")
      .attr("r", (d: SimNode) => NODE_RADIUS[d.size])
      .attr("cx", (d: SimNode) => d.x)
      .attr("cy", (d: SimNode) => d.y)
      .attr("fill", (d: SimNode) => d.color)
      .on("click", (_event: any, d: SimNode) => onNodeClick(d.id));
    this.nodeSel.append("title").text((d: SimNode) => `${d.label} (${d.kind})`);

    this.labelSel = zoomLayer
      .append("g")
      .attr("class", "labels")
      .selectAll("text")
      .data(this.nodes)
      .join("text")
      .attr("class", "node-label")
      .attr("x", (d: SimNode) => d.x + NODE_RADIUS[d.size] + 2)
      .attr("y", (d: SimNode) => d.y + 3)
      .text((d: SimNode) => d.label)
      .style("display", "none");
  }

  /** Dim everything outside the highlight; show labels for members. */
  applyHighlight(highlight: Highlight | null): void {
    const ids = highlight?.ids ?? new Set<string>();
    const provenance = highlight?.provenance ?? {};
    const active = ids.size > 0;
    this.nodeSel
      .classed("dimmed", (d: SimNode) => active && !ids.has(d.id))
      .classed("prov-selected", (d: SimNode) => provenance[d.id] === "selected")
      .classed("prov-downward", (d: SimNode) => provenance[d.id] === "downward")
      .classed("prov-upward", (d: SimNode) => provenance[d.id] === "upward");
    this.linkSel.classed(
      "dimmed",
      (d: any) => active && !(ids.has(d.source.id) && ids.has(d.target.id))
    );
    this.labelSel.style("display", (d: SimNode) => (active && ids.has(d.id) ? null : "none"));
  }
}

/** Build the six-entry stage legend from the colors present in the document. */
export function renderLegend(container: HTMLElement, doc: VizDocument): void {
  const colorByStage = new Map<number, string>();
  for (const node of doc.nodes) colorByStage.set(node.stage, node.color);
  container.innerHTML = "";
  STAGE_LABELS.forEach((label, ordinal) => {
    const row = document.createElement("div");
    row.className = "legend-row";
    const swatch = document.createElement("span");
    swatch.className = "legend-swatch";
    const color = colorByStage.get(ordinal);
    if (color) swatch.style.background = color;
    row.append(swatch, document.createTextNode(`${label} (${ordinal})`));
    container.appendChild(row);
  });
}
