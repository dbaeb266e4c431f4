// Collections page: find or create collections, inspect members, add
// (via the search API as the member finder) and remove members.

import { clear, el } from "../dom.js";
import { notify, notifyError } from "../notices.js";
import type { Store } from "../state.js";

export function renderCollections(root: HTMLElement, store: Store, path?: string): void {
  const container = clear(root);
  const listing = el("div", { class: "coll-list" });
  const detail = el("div", { class: "coll-detail" });

  const refreshList = async () => {
    try {
      // collections are searchable entities; an empty query ranks by path
      const payload = await store.api.search("", 100, { mode: "collection" });
      clear(listing);
      if (payload.hits.length === 0) {
        listing.append(el("p", { class: "empty" }, ["no collections yet"]));
      }
      for (const hit of payload.hits) {
        listing.append(el("div", { class: "coll-row" }, [
          el("a", { href: `#collections${hit.path}` }, [hit.path]),
        ]));
      }
    } catch (err) {
      notifyError(err);
    }
  };

  const showDetail = async (collPath: string) => {
    try {
      const view = await store.api.collection(collPath);
      clear(detail).append(
        el("h3", {}, [view.collection.path]),
        el("p", {}, [view.collection.description || "(no description)"]),
      );
      if (view.members.length === 0) {
        detail.append(el("p", { class: "empty" }, ["no members"]));
      }
      for (const member of view.members) {
        detail.append(el("div", { class: "member-row" }, [
          el("span", { class: "file-mode" }, [member.mode]),
          el("a", { href: `#meta${member.path}` }, [member.path]),
          el("button", {
            onclick: async () => {
              try {
                await store.api.collectionAction("remove", collPath, member.path);
                showDetail(collPath);
              } catch (err) {
                notifyError(err);
              }
            },
          }, ["remove"]),
        ]));
      }
      const memberInput = el("input", { placeholder: "/user/ag_data/...", class: "search-wide" });
      detail.append(el("div", { class: "toolbar" }, [
        memberInput,
        el("button", {
          class: "primary",
          onclick: async () => {
            if (!memberInput.value) return;
            try {
              await store.api.collectionAction("add", collPath, memberInput.value);
              notify("member added");
              showDetail(collPath);
            } catch (err) {
              notifyError(err);
            }
          },
        }, ["add member"]),
      ]));
    } catch (err) {
      clear(detail).append(el("p", { class: "empty" }, ["not found"]));
      notifyError(err);
    }
  };

  const createInput = el("input", {
    placeholder: `/${store.state.username}/ag_data/my-collection`,
    class: "search-wide",
  });
  container.append(
    el("h2", {}, ["collections"]),
    el("div", { class: "toolbar" }, [
      createInput,
      el("button", {
        class: "primary",
        onclick: async () => {
          if (!createInput.value) return;
          try {
            await store.api.collectionAction("create", createInput.value);
            notify("collection created");
            refreshList();
          } catch (err) {
            notifyError(err);
          }
        },
      }, ["create collection"]),
    ]),
    el("div", { class: "coll-split" }, [listing, detail]),
  );
  refreshList();
  if (path) showDetail(path);
}
