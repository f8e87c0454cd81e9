// Application wiring: dropdowns, grid rendering, hover tooltip, click drawer.
// Stale responses are dropped via RequestSlot (last write wins per view).

import { ApiClient, ApiError, RequestSlot, type WindowRange } from "./api.js";
import {
  hideDrawer,
  hideTooltip,
  renderDrawer,
  renderErrorBanner,
  renderGrids,
  tooltipLoading,
  tooltipTopic,
  tooltipUnavailable,
  type DrawerState,
} from "./render.js";
import { buildViewModel, describeWindow, windowChoices, type PanelCell } from "./viewmodel.js";

const api = new ApiClient("");
const gridSlot = new RequestSlot();
const drawerSlot = new RequestSlot();

const els = {
  user: document.getElementById("user-select") as HTMLSelectElement,
  window: document.getElementById("window-select") as HTMLSelectElement,
  panels: document.getElementById("panels") as HTMLElement,
  tooltip: document.getElementById("tooltip") as HTMLElement,
  drawer: document.getElementById("drawer") as HTMLElement,
  meta: document.getElementById("meta-line") as HTMLElement,
};

let currentUser = "";
let currentWindow: WindowRange | null = null;
let windows: { label: string; value: WindowRange | null }[] = [];

async function boot(): Promise<void> {
  try {
    const [meta, users] = await Promise.all([api.meta(), api.users()]);
    els.meta.textContent =
      `${meta.k} topics on a ${2 ** meta.h}×${2 ** meta.h} grid · ` +
      `${meta.entry_count} log entries · window ${describeWindow(meta.window)}`;

    windows = windowChoices(meta.window, meta.benchmark_start);
    els.window.textContent = "";
    windows.forEach((choice, i) => {
      const option = document.createElement("option");
      option.value = String(i);
      option.textContent = choice.label;
      els.window.appendChild(option);
    });

    els.user.textContent = "";
    for (const user of users.users) {
      const option = document.createElement("option");
      option.value = user.id;
      option.textContent = `${user.id} (${user.group ?? "no group"}, ${user.entries})`;
      els.user.appendChild(option);
    }
    currentUser = users.users[0]?.id ?? "";
    await refreshGrids();
  } catch (err) {
    renderErrorBanner(els.panels, `failed to load snapshot: ${messageOf(err)}`);
  }
}

async function refreshGrids(): Promise<void> {
  hideDrawer(els.drawer);
  hideTooltip(els.tooltip);
  if (!currentUser) {
    renderErrorBanner(els.panels, "no users in this snapshot");
    return;
  }
  try {
    const grids = await gridSlot.run(() => api.grids(currentUser, currentWindow ?? undefined));
    if (grids === undefined) return; // superseded by a newer selection
    renderGrids(els.panels, buildViewModel(grids), {
      onHover: showTopicTooltip,
      onLeave: () => hideTooltip(els.tooltip),
      onClick: openAccessDrawer,
    });
  } catch (err) {
    renderErrorBanner(els.panels, `failed to load grids: ${messageOf(err)}`);
  }
}

function showTopicTooltip(cell: PanelCell, target: HTMLElement): void {
  const rect = target.getBoundingClientRect();
  els.tooltip.style.left = `${rect.right + 8 + window.scrollX}px`;
  els.tooltip.style.top = `${rect.top + window.scrollY}px`;
  tooltipLoading(els.tooltip);
  api
    .topic(cell.k)
    .then((topic) => {
      if (!els.tooltip.hidden) tooltipTopic(els.tooltip, topic);
    })
    .catch((err) => {
      if (els.tooltip.hidden) return;
      if (err instanceof ApiError && err.status === 404) tooltipUnavailable(els.tooltip);
      else tooltipUnavailable(els.tooltip);
    });
}

function openAccessDrawer(cell: PanelCell): void {
  const state: DrawerState = {
    k: cell.k,
    label: cell.label,
    user: currentUser,
    offset: 0,
    limit: 50,
  };
  void loadDrawerPage(state);
}

async function loadDrawerPage(state: DrawerState): Promise<void> {
  try {
    const page = await drawerSlot.run(() =>
      api.accesses(state.k, { user: state.user, offset: state.offset, limit: state.limit }),
    );
    if (page === undefined) return;
    renderDrawer(els.drawer, state, page, (offset) => {
      void loadDrawerPage({ ...state, offset });
    });
  } catch (err) {
    renderErrorBanner(els.drawer, `failed to load accesses: ${messageOf(err)}`);
    els.drawer.hidden = false;
  }
}

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

els.user.addEventListener("change", () => {
  currentUser = els.user.value;
  void refreshGrids();
});
els.window.addEventListener("change", () => {
  currentWindow = windows[Number(els.window.value)]?.value ?? null;
  void refreshGrids();
});
document.addEventListener("keydown", (event) => {
  if (event.key === "Escape") hideDrawer(els.drawer);
});

void boot();
