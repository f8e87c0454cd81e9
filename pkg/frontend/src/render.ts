// DOM construction for the five-panel view, the hover tooltip, and the
// access-detail drawer. Values land in the DOM exactly as the server sent
// them (data-value attributes carry the raw JSON numbers).

import type { AccessPage, TopicInfo } from "./api.js";
import { cellBackground, type GridViewModel, type Panel, type PanelCell } from "./viewmodel.js";

export interface CellHandlers {
  onHover?: (cell: PanelCell, target: HTMLElement) => void;
  onLeave?: () => void;
  onClick?: (cell: PanelCell, target: HTMLElement) => void;
}

export function renderGrids(
  container: HTMLElement,
  vm: GridViewModel,
  handlers: CellHandlers = {},
): void {
  container.textContent = "";
  for (const panel of vm.panels) {
    container.appendChild(renderPanel(panel, vm, handlers));
  }
}

function renderPanel(panel: Panel, vm: GridViewModel, handlers: CellHandlers): HTMLElement {
  const section = document.createElement("section");
  section.className = "panel";
  section.dataset.channel = panel.channel;
  if (panel.channel === vm.selectedChannel) section.classList.add("selected");

  const title = document.createElement("h3");
  title.textContent = panel.title;
  section.appendChild(title);

  const grid = document.createElement("div");
  grid.className = "grid";
  grid.style.gridTemplateColumns = `repeat(${vm.side}, 1fr)`;
  for (const cell of panel.cells) {
    grid.appendChild(renderCell(panel, cell, handlers));
  }
  section.appendChild(grid);
  return section;
}

function renderCell(panel: Panel, cell: PanelCell, handlers: CellHandlers): HTMLElement {
  const div = document.createElement("div");
  div.className = "cell";
  div.textContent = cell.label;
  div.dataset.k = String(cell.k);
  div.dataset.col = String(cell.col);
  div.dataset.row = String(cell.row);
  div.dataset.value = String(cell.value);
  div.style.gridColumn = String(cell.col + 1);
  div.style.gridRow = String(cell.row + 1);
  div.style.background = cellBackground(panel.channel, cell.intensity);
  if (cell.intensity > 0.55) div.classList.add("dark");
  if (handlers.onHover) div.addEventListener("mouseenter", () => handlers.onHover!(cell, div));
  if (handlers.onLeave) div.addEventListener("mouseleave", () => handlers.onLeave!());
  if (handlers.onClick) div.addEventListener("click", () => handlers.onClick!(cell, div));
  return div;
}

export function renderErrorBanner(container: HTMLElement, message: string): void {
  container.textContent = ""; // never leave stale panels behind an error
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  container.appendChild(banner);
}

// -- tooltip ----------------------------------------------------------------

export function tooltipLoading(tooltip: HTMLElement): void {
  tooltip.textContent = "";
  const note = document.createElement("div");
  note.className = "loading";
  note.textContent = "loading topic…";
  tooltip.appendChild(note);
  tooltip.hidden = false;
}

export function tooltipTopic(tooltip: HTMLElement, topic: TopicInfo): void {
  tooltip.textContent = "";
  const head = document.createElement("div");
  head.className = "tooltip-head";
  head.textContent = `topic ${topic.k} · ${topic.label}`;
  tooltip.appendChild(head);
  const list = document.createElement("table");
  for (const { word, p } of topic.words) {
    const row = list.insertRow();
    row.insertCell().textContent = word;
    const cell = row.insertCell();
    cell.textContent = p.toPrecision(3);
    cell.dataset.p = String(p);
  }
  tooltip.appendChild(list);
  tooltip.hidden = false;
}

export function tooltipUnavailable(tooltip: HTMLElement): void {
  tooltip.textContent = "topic unavailable";
  tooltip.hidden = false;
}

export function hideTooltip(tooltip: HTMLElement): void {
  tooltip.hidden = true;
  tooltip.textContent = "";
}

// -- access drawer ----------------------------------------------------------

export interface DrawerState {
  k: number;
  label: string;
  user: string;
  offset: number;
  limit: number;
}

export function renderDrawer(
  drawer: HTMLElement,
  state: DrawerState,
  page: AccessPage,
  onPage: (offset: number) => void,
): void {
  drawer.textContent = "";
  drawer.hidden = false;

  const head = document.createElement("h3");
  head.textContent = `accesses of ${state.user} on topic ${state.k} (${state.label})`;
  drawer.appendChild(head);

  if (page.total === 0) {
    const empty = document.createElement("div");
    empty.className = "empty";
    empty.textContent = "no accesses";
    drawer.appendChild(empty);
    return;
  }

  const list = document.createElement("table");
  list.className = "accesses";
  for (const entry of page.entries) {
    const row = list.insertRow();
    row.insertCell().textContent = entry.ts;
    row.insertCell().textContent = entry.action;
    row.insertCell().textContent = entry.path;
  }
  drawer.appendChild(list);

  const nav = document.createElement("div");
  nav.className = "pager";
  const prev = document.createElement("button");
  prev.textContent = "prev";
  prev.disabled = page.offset === 0;
  prev.addEventListener("click", () => onPage(Math.max(0, page.offset - page.limit)));
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = page.offset + page.entries.length >= page.total;
  next.addEventListener("click", () => onPage(page.offset + page.limit));
  const status = document.createElement("span");
  status.textContent = `${page.offset + 1}–${page.offset + page.entries.length} of ${page.total}`;
  nav.append(prev, status, next);
  drawer.appendChild(nav);
}

export function hideDrawer(drawer: HTMLElement): void {
  drawer.hidden = true;
  drawer.textContent = "";
}
